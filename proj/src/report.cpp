#include "boltzlp/report.hpp"

#include <sstream>

namespace boltzlp {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void CheckReport::add(const std::string& key, double value) { extra.emplace_back(key, format_double(value)); }

void CheckReport::add(const std::string& key, const std::string& value) { extra.emplace_back(key, value); }

std::string CheckReport::to_string() const {
    std::ostringstream os;
    os << "check_name=" << check_name << "\nlhs=" << format_double(lhs) << "\nrhs=" << format_double(rhs)
       << "\nratio=" << format_double(ratio) << "\npass=" << (pass ? "true" : "false") << "\nn=" << n
       << "\neps_theta=" << format_double(eps_theta) << "\ndelta=" << format_double(delta) << "\n";
    for (const auto& [k, v] : extra) os << k << '=' << v << '\n';
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const CheckReport& r) { return os << r.to_string(); }

}  // namespace boltzlp
