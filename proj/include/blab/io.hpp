#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "blab/bounds_verification.hpp"
#include "blab/core_products.hpp"
#include "blab/critical_points.hpp"
#include "blab/integral_means.hpp"
#include "blab/regions_geometry.hpp"

namespace blab::io {

using Json = nlohmann::ordered_json;

/// Zero-set text: one zero per line as `re im` or `r@theta`; blank lines and
/// lines starting with '#' are skipped. Errors carry `source:line`.
ZeroSequence parse_zero_set(std::string_view text, std::string_view source = "<input>");
ZeroSequence read_zero_set(const std::filesystem::path& path);
/// `re im` per line, shortest round-trip decimal.
std::string format_zero_set(std::span<const Complex> points);

/// {"arcs": [[a, b], ...], "points": [t, ...], "cantor": {"base": [a, b], "ratio": r, "depth": d}}
regions::BoundarySet boundary_from_json(const Json& j);
regions::BoundarySet read_boundary_set(const std::filesystem::path& path);
Json to_json(const regions::BoundarySet& set);

Json complex_json(Complex z);
Json to_json(const bounds::BoundReport& report);
Json to_json(const critical::SumSeries& series);
Json to_json(const means::MeansTable& table);

/// rank,index,ratio,z_re,z_im,t_re,t_im,lambda_re,lambda_im
std::string worst_csv(const bounds::BoundReport& report);
/// index,term,partial_sum
std::string series_csv(const critical::SumSeries& series);
/// N,p,r,value
std::string means_csv(const means::MeansTable& table);

std::string format_double(double x);
std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace blab::io
