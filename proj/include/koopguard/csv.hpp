#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "koopguard/runner.hpp"

namespace koopguard {

// t,y_true,y_meas,y_pred,u_cmd,u_applied,soc,r_D,det_flag,r_I,iso_flag
// Reals use 17 significant digits; absent values are empty cells.
void write_csv(const std::vector<RunRecord>& records, std::ostream& out);
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

// Reads a trace in the write_csv layout. Only t, y_meas and u_cmd are required.
std::vector<RunRecord> read_records(const std::string& path);

// Needs columns t, y (or y_meas) and u (or u_cmd); uniform sampling is enforced.
std::vector<Frame> ingest_csv(const std::string& path);

}  // namespace koopguard
