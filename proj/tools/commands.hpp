#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "framelet/quadrature.hpp"

namespace framelet::cli {

enum class Command { gen_lattice, transform, diagnostics, sample };
enum class TransformMode { decompose, reconstruct, roundtrip };
enum class RuleFamily { kronecker, gauss };

inline constexpr int kMaxLevel = 8;
inline constexpr int kMaxGrid = 2048;

/// Everything a subcommand needs; filled from the command line.
struct JobConfig {
  Command command = Command::gen_lattice;
  int level = 3;
  std::string bank = "dau2-simplex-r2";
  LatticeParams lattice = LatticeParams::defaults();
  RuleFamily rules = RuleFamily::kronecker;
  TransformMode mode = TransformMode::roundtrip;
  std::optional<std::filesystem::path> in;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> random_seed;
  int grid = 256;
  std::string kind = "low";  // low, high<n> (1-based) or masks
  std::size_t node = 0;
  std::size_t mask_points = 1000;
  std::optional<double> tol;
  bool bit_repro = false;
  bool skip_gram = false;
};

/// Bad flags, bad parameters or bad input documents; maps to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTolerance = 3;

/// Throws ValidationError when the config breaks a guard (level, grid, lattice, kind).
void validate(const JobConfig& cfg);

/// --out if given, otherwise FRAMELET_DATA_DIR (or the working directory) joined with default_name.
[[nodiscard]] std::filesystem::path output_path(const JobConfig& cfg, const std::string& default_name);

/// Runs one validated command. Returns kExitOk or kExitTolerance; throws on errors.
int run(const JobConfig& cfg, std::ostream& out);

/// Full front end: parses args (args[0] is the program name), runs, and maps errors to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framelet::cli
