#pragma once

#include "boltzlp/kernel_grid.hpp"

#include <iosfwd>
#include <string>

namespace boltzlp {

// Binary layout: int64 n, float64 radius, float64 time_tag (little endian),
// then n^3 float64 values, x fastest.
void write_binary(std::ostream& os, const Distribution& f);
Distribution read_binary(std::istream& is);
void save_binary(const std::string& path, const Distribution& f);
Distribution load_binary(const std::string& path);

// CSV with header vx,vy,vz,f
void write_csv(std::ostream& os, const Distribution& f);
void save_csv(const std::string& path, const Distribution& f);

}  // namespace boltzlp
