#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace boltzlp {

// Machine-readable key=value report emitted by every check.
struct CheckReport {
    std::string check_name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
    int n = 0;
    double eps_theta = 0.0;
    double delta = 0.0;
    std::vector<std::pair<std::string, std::string>> extra;

    void add(const std::string& key, double value);
    void add(const std::string& key, const std::string& value);
    std::string to_string() const;
};

std::ostream& operator<<(std::ostream& os, const CheckReport& r);

std::string format_double(double v);

}  // namespace boltzlp
