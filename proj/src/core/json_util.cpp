#include "tflab/json_util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "tflab/error.hpp"

namespace tflab {

double round12(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

nlohmann::json jnum(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return round12(v);
}

nlohmann::json jvec(const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
}

std::string canonical_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file " + path);
    out << text;
    if (!out) throw DomainError("failed writing " + path);
}

}  // namespace tflab
