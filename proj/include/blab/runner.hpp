#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blab/error.hpp"
#include "blab/io.hpp"

namespace blab::runner {

/// Malformed or schema-violating experiment config. `field` is the dotted
/// path of the offending key, empty for syntax errors.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : "field '" + field + "': " + what), field_(field) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct Invocation {
  std::string subcommand;
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct Outcome {
  std::size_t violations = 0;
  io::Json report;  // {"canonical": ..., "meta": ...}
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

const std::vector<std::string>& subcommands();

/// Runs one experiment in memory. Relative file references in `config` are
/// resolved against `base_dir`. Throws ConfigError, ParseError or a numerical
/// Error.
Outcome execute(const std::string& subcommand, const io::Json& config, const std::filesystem::path& base_dir,
                std::optional<std::uint64_t> seed_override = std::nullopt);

/// `canonical` section of a report, serialised the same way as on disk.
std::string canonical_text(const io::Json& report);

/// Full driver: reads the config, executes, writes every artifact atomically
/// into the output directory, maps failures to exit codes. Error payloads go
/// to `err` as JSON.
int run(const Invocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace blab::runner
