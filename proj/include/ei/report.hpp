#pragma once

#include <string>
#include <vector>

#include "ei/analyses.hpp"

namespace ei {

struct ReportFiles {
  std::string estimates_csv;       // empty when csv was not requested
  std::vector<std::string> svgs;   // one per option column, when drawn
};

// Writes the analysis products under out_dir:
//   estimates.csv            row_label,col_label,mean,sd,ci_lo,ci_hi
//   plots/curve_<option>.svg one chart per option column (only when the
//                            result carries an axis, i.e. is a curve)
// Numbers are printed with shortest round-trip formatting, so the bytes are
// a pure function of the result.  An empty result yields a header-only CSV
// and no SVGs.  Throws IoFailure when a file cannot be written.
ReportFiles report_emit(const EstimateResult& result, const std::string& out_dir,
                        bool csv = true, bool svg = true);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace ei
