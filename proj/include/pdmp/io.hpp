#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdmp/types.hpp"

namespace pdmp {

// shortest decimal form that round-trips (std::to_chars), so identical runs
// produce identical bytes
std::string format_double(double v);

// one JSON object per record: {"t":..,"tag":"..","region":..,"x":[..],"v":[..]}
// with a 0/1 "frozen" array appended while any coordinate is stuck
void write_skeleton_ndjson(std::ostream& os, const Skeleton& skel);

// header t,tag,region,x0..,v0..[,frozen0..]; frozen columns appear only if
// some record has a frozen coordinate
void write_skeleton_csv(std::ostream& os, const Skeleton& skel);

void write_series_csv(std::ostream& os, const std::vector<std::string>& columns,
                      const std::vector<Vec>& rows);

}  // namespace pdmp
