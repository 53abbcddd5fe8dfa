#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmtda/dataio.hpp"
#include "mmtda/rng.hpp"

namespace mmtda::ppgen {

enum class ProcessKind { Poisson, Normal, Matern, Thomas, BaddeleySilverman, IFS };

inline constexpr std::array<ProcessKind, 6> kAllProcesses = {
    ProcessKind::Poisson, ProcessKind::Normal,           ProcessKind::Matern,
    ProcessKind::Thomas,  ProcessKind::BaddeleySilverman, ProcessKind::IFS};

/// Lower-case CLI name ("poisson", "normal", "matern", "thomas",
/// "baddeley-silverman", "ifs").
std::string_view process_name(ProcessKind kind);
std::optional<ProcessKind> parse_process(std::string_view name);

/// Parameters of one point process on the unit square. Each kind reads only
/// the fields it needs; defaults are the benchmark values.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::Poisson;
  double lambda = 400.0;  // event rate (Poisson, Normal, IFS)
  double mu = 0.5;        // Normal mean; for Matern/Thomas the mean children per parent
  double sigma = 0.2;     // Normal coordinate sd; Thomas child offset sd
  double kappa = 80.0;    // parent rate (Matern, Thomas)
  double radius = 0.1;    // Matern disk radius
  double tile_side = 1.0 / 28.0;

  /// Benchmark parameters for `kind`.
  static ProcessSpec defaults(ProcessKind kind);
  /// Throws ParameterError if a parameter used by `kind` is out of range.
  void validate() const;
};

using Point2 = std::pair<double, double>;

/// Parent locations of a cluster process, kept for tests.
struct ClusterTrace {
  std::vector<Point2> parents;
  std::vector<std::size_t> parent_of;  // per emitted child
};

std::uint64_t sample_poisson_count(double lambda, Rng& rng);

PointSet gen_poisson(const ProcessSpec& spec, Rng& rng);
PointSet gen_normal(const ProcessSpec& spec, Rng& rng);
PointSet gen_matern(const ProcessSpec& spec, Rng& rng, ClusterTrace* trace = nullptr);
PointSet gen_thomas(const ProcessSpec& spec, Rng& rng, ClusterTrace* trace = nullptr);
PointSet gen_baddeley_silverman(const ProcessSpec& spec, Rng& rng);
PointSet gen_ifs(const ProcessSpec& spec, Point2 start, Rng& rng);

/// One step of the fractal recursion with map `map_index` in 0..4.
Point2 ifs_map(int map_index, Point2 p);

/// Dispatches on spec.kind. IFS starts from (0.5, 0.5).
PointSet generate(const ProcessSpec& spec, Rng& rng);

struct ClassSpec {
  ProcessSpec process;
  std::size_t examples = 100;
};

/// Labels follow list order; each sample gets its own generator seeded from
/// (seed, class, example), so the result does not depend on generation order.
/// Sample ids are "<process>_<class>_<example>".
Dataset gen_dataset(const std::vector<ClassSpec>& classes, std::uint64_t seed);

}  // namespace mmtda::ppgen
