#include "blab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "blab/error.hpp"

namespace blab::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Full-token decimal parse; std::from_chars rounds to nearest.
bool parse_number(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw ParseError(os.str());
}

double number_field(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("boundary set: ") + what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string("boundary set: ") + what + " must be finite");
  return v;
}

regions::Arc arc_field(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ParseError(std::string("boundary set: ") + what + " must be [start, end]");
  return {number_field(j[0], what), number_field(j[1], what)};
}

}  // namespace

ZeroSequence parse_zero_set(std::string_view text, std::string_view source) {
  ZeroSequence zeros;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    try {
      if (const auto at = line.find('@'); at != std::string_view::npos) {
        double r = 0.0;
        double theta = 0.0;
        if (!parse_number(trim(line.substr(0, at)), r) || !parse_number(trim(line.substr(at + 1)), theta)) {
          fail(source, line_no, "expected `r@theta`");
        }
        if (!(r > 0.0 && r < 1.0)) fail(source, line_no, "modulus must lie in (0, 1)");
        zeros.push_back(Zero::from_polar(1.0 - r, theta));
        continue;
      }
      const auto gap = line.find_first_of(" \t");
      if (gap == std::string_view::npos) fail(source, line_no, "expected `re im` or `r@theta`");
      double re = 0.0;
      double im = 0.0;
      if (!parse_number(line.substr(0, gap), re) || !parse_number(trim(line.substr(gap)), im)) {
        fail(source, line_no, "expected `re im` or `r@theta`");
      }
      zeros.push_back(Complex(re, im));
    } catch (const InvalidZeroError& e) {
      fail(source, line_no, e.what());
    }
  }
  return zeros;
}

ZeroSequence read_zero_set(const std::filesystem::path& path) {
  return parse_zero_set(read_text(path), path.string());
}

std::string format_zero_set(std::span<const Complex> points) {
  std::string out;
  for (const Complex z : points) {
    out += format_double(z.real());
    out += ' ';
    out += format_double(z.imag());
    out += '\n';
  }
  return out;
}

regions::BoundarySet boundary_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("boundary set: expected a JSON object");
  std::vector<regions::Arc> arcs;
  std::vector<double> points;
  std::optional<regions::CantorGenerator> cantor;
  for (const auto& [key, value] : j.items()) {
    if (key == "arcs") {
      if (!value.is_array()) throw ParseError("boundary set: arcs must be an array");
      for (const Json& a : value) arcs.push_back(arc_field(a, "arc"));
    } else if (key == "points") {
      if (!value.is_array()) throw ParseError("boundary set: points must be an array");
      for (const Json& p : value) points.push_back(number_field(p, "point"));
    } else if (key == "cantor") {
      if (!value.is_object()) throw ParseError("boundary set: cantor must be an object");
      regions::CantorGenerator g;
      for (const auto& [ck, cv] : value.items()) {
        if (ck == "base") {
          g.base = arc_field(cv, "cantor.base");
        } else if (ck == "ratio") {
          g.ratio = number_field(cv, "cantor.ratio");
        } else if (ck == "depth") {
          if (!cv.is_number_integer()) throw ParseError("boundary set: cantor.depth must be an integer");
          g.depth = cv.get<int>();
        } else {
          throw ParseError("boundary set: unknown field cantor." + ck);
        }
      }
      if (!value.contains("base")) throw ParseError("boundary set: cantor.base is required");
      cantor = g;
    } else {
      throw ParseError("boundary set: unknown field " + key);
    }
  }
  try {
    return regions::BoundarySet(std::move(arcs), std::move(points), cantor);
  } catch (const DomainError& e) {
    throw ParseError(std::string("boundary set: ") + e.what());
  }
}

regions::BoundarySet read_boundary_set(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return boundary_from_json(j);
}

Json to_json(const regions::BoundarySet& set) {
  Json j = Json::object();
  Json arcs = Json::array();
  for (const regions::Arc& a : set.arcs()) arcs.push_back({a.start, a.end});
  j["arcs"] = arcs;
  j["points"] = set.points();
  if (set.cantor()) {
    const auto& g = *set.cantor();
    j["cantor"] = {{"base", {g.base.start, g.base.end}}, {"ratio", g.ratio}, {"depth", g.depth}};
  }
  return j;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const bounds::BoundReport& report) {
  auto witness = [](const bounds::Witness& w) {
    return Json{{"index", w.index}, {"z", complex_json(w.z)}, {"t", complex_json(w.t)}, {"lambda", complex_json(w.lambda)}};
  };
  Json worst = Json::array();
  for (const bounds::RatioRecord& r : report.worst) worst.push_back({{"ratio", r.ratio}, {"witness", witness(r.witness)}});
  return Json{{"samples", report.samples},
              {"violations", report.violations},
              {"worst_ratio", report.worst_ratio},
              {"worst_witness", witness(report.worst_witness)},
              {"worst", worst}};
}

Json to_json(const critical::SumSeries& series) {
  return Json{{"terms", series.terms}, {"partial_sums", series.partial_sums}, {"total", series.total()}};
}

Json to_json(const means::MeansTable& table) {
  Json rows = Json::array();
  for (const means::MeansRow& r : table.rows) {
    rows.push_back({{"N", r.truncation}, {"p", r.p}, {"r", r.r}, {"value", r.value}});
  }
  return rows;
}

std::string worst_csv(const bounds::BoundReport& report) {
  std::string out = "rank,index,ratio,z_re,z_im,t_re,t_im,lambda_re,lambda_im\n";
  std::size_t rank = 0;
  for (const bounds::RatioRecord& r : report.worst) {
    const bounds::Witness& w = r.witness;
    out += std::to_string(++rank) + "," + std::to_string(w.index) + "," + format_double(r.ratio);
    for (const Complex c : {w.z, w.t, w.lambda}) out += "," + format_double(c.real()) + "," + format_double(c.imag());
    out += "\n";
  }
  return out;
}

std::string series_csv(const critical::SumSeries& series) {
  std::string out = "index,term,partial_sum\n";
  for (std::size_t i = 0; i < series.terms.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(series.terms[i]) + "," + format_double(series.partial_sums[i]) + "\n";
  }
  return out;
}

std::string means_csv(const means::MeansTable& table) {
  std::string out = "N,p,r,value\n";
  for (const means::MeansRow& r : table.rows) {
    out += std::to_string(r.truncation) + "," + format_double(r.p) + "," + format_double(r.r) + "," + format_double(r.value) +
           "\n";
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace blab::io
