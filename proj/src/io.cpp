#include "boltzlp/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace boltzlp {
namespace {

template <class T>
void put_le(std::ostream& os, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw std::runtime_error("truncated distribution file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

}  // namespace

void write_binary(std::ostream& os, const Distribution& f) {
    put_le<std::int64_t>(os, f.grid.n);
    put_le<double>(os, f.grid.radius);
    put_le<double>(os, f.time_tag);
    for (double v : f.values) put_le<double>(os, v);
}

Distribution read_binary(std::istream& is) {
    const auto n = get_le<std::int64_t>(is);
    const double radius = get_le<double>(is);
    const double tag = get_le<double>(is);
    if (n < 4 || n > 4096) throw std::runtime_error("distribution file: implausible grid size");
    Distribution f(make_grid(static_cast<int>(n), radius));
    f.time_tag = tag;
    for (double& v : f.values) v = get_le<double>(is);
    return f;
}

void save_binary(const std::string& path, const Distribution& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_binary(os, f);
}

Distribution load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_binary(is);
}

void write_csv(std::ostream& os, const Distribution& f) {
    os << "vx,vy,vz,f\n" << std::setprecision(17);
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        const Vec3 v = f.grid.node(idx);
        os << v[0] << ',' << v[1] << ',' << v[2] << ',' << f.values[idx] << '\n';
    }
}

void save_csv(const std::string& path, const Distribution& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(os, f);
}

}  // namespace boltzlp
