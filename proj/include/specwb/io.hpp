#pragma once

#include "specwb/counting.hpp"
#include "specwb/fem.hpp"
#include "specwb/spectrum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace specwb {

// 17 significant digits; round-trips every double.
std::string format_double(double v);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);
nlohmann::json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ComparisonReport& r);

nlohmann::json mesh_to_json(const Mesh& m);
// Validates the mesh; throws ValidationError on malformed input.
Mesh mesh_from_json(const nlohmann::json& j);

void write_eigenvalues_csv(std::ostream& out, const EigResult& r);

} // namespace specwb
