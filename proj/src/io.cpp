#include "specwb/io.hpp"

#include "specwb/errors.hpp"

#include <cstdio>
#include <ostream>

namespace specwb {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
    out << "index,eigenvalue\n";
    for (std::size_t i = 0; i < s.size(); ++i) out << i + 1 << ',' << format_double(s[i]) << '\n';
}

nlohmann::json spectrum_to_json(const Spectrum& s) {
    nlohmann::json j;
    j["values"] = s.values();
    if (s.cap_complete()) {
        j["cap"] = s.valid_up_to();
    } else {
        j["cap"] = nullptr;
        j["count"] = s.size();
    }
    return j;
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
    try {
        auto values = j.at("values").get<std::vector<double>>();
        if (j.contains("cap") && !j.at("cap").is_null()) return Spectrum(std::move(values), CapComplete{j.at("cap").get<double>()});
        const std::size_t n = values.size();
        return Spectrum(std::move(values), CountComplete{n});
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("spectrum JSON: ") + e.what());
    }
}

nlohmann::json report_to_json(const ComparisonReport& r) {
    nlohmann::json j;
    j["holds"] = r.holds;
    j["window"] = {r.window_lo, r.window_hi};
    if (r.first_violation)
        j["first_violation"] = {{"lambda", r.first_violation->lambda},
                                {"lhs", r.first_violation->lhs},
                                {"rhs", r.first_violation->rhs}};
    else
        j["first_violation"] = nullptr;
    return j;
}

nlohmann::json mesh_to_json(const Mesh& m) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : m.vertices) j["vertices"].push_back({v.x, v.y});
    j["triangles"] = m.triangles;
    j["segments"] = m.segments;
    return j;
}

Mesh mesh_from_json(const nlohmann::json& j) {
    Mesh m;
    try {
        for (const auto& v : j.at("vertices")) {
            if (v.size() != 2) throw ValidationError("mesh JSON: vertices must be [x, y] pairs");
            m.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        }
        m.triangles = j.at("triangles").get<std::vector<std::array<int, 3>>>();
        if (j.contains("segments")) m.segments = j.at("segments").get<std::vector<std::array<int, 2>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("mesh JSON: ") + e.what());
    }
    validate_mesh(m);
    return m;
}

void write_eigenvalues_csv(std::ostream& out, const EigResult& r) {
    out << "index,eigenvalue\n";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        out << i + 1 << ',' << format_double(r.eigenvalues[i]) << '\n';
}

} // namespace specwb
