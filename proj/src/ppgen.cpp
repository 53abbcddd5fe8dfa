#include "mmtda/ppgen.hpp"

#include <cmath>
#include <numbers>

#include "mmtda/error.hpp"

namespace mmtda::ppgen {

namespace {

constexpr std::string_view kNames[] = {"poisson", "normal", "matern", "thomas", "baddeley-silverman", "ifs"};

void require_kind(const ProcessSpec& spec, ProcessKind kind) {
  if (spec.kind != kind)
    throw ParameterError("generator for '" + std::string(process_name(kind)) + "' called with a '" +
                         std::string(process_name(spec.kind)) + "' spec");
  spec.validate();
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

// Children of a Poisson(kappa) parent pattern on the unit square; `offset`
// draws one child displacement.
template <typename OffsetFn>
PointSet gen_cluster(const ProcessSpec& spec, Rng& rng, ClusterTrace* trace, OffsetFn offset) {
  PointSet out("", 0, 2);
  const std::uint64_t parents = rng.poisson(spec.kappa);
  if (trace) {
    trace->parents.clear();
    trace->parent_of.clear();
  }
  for (std::uint64_t p = 0; p < parents; ++p) {
    const double px = rng.uniform();
    const double py = rng.uniform();
    if (trace) trace->parents.emplace_back(px, py);
    const std::uint64_t children = rng.poisson(spec.mu);
    for (std::uint64_t c = 0; c < children; ++c) {
      const auto [dx, dy] = offset();
      out.push(px + dx, py + dy);
      if (trace) trace->parent_of.push_back(static_cast<std::size_t>(p));
    }
  }
  return out;
}

}  // namespace

std::string_view process_name(ProcessKind kind) { return kNames[static_cast<int>(kind)]; }

std::optional<ProcessKind> parse_process(std::string_view name) {
  for (ProcessKind k : kAllProcesses)
    if (process_name(k) == name) return k;
  if (name == "baddeley_silverman" || name == "bs") return ProcessKind::BaddeleySilverman;
  return std::nullopt;
}

ProcessSpec ProcessSpec::defaults(ProcessKind kind) {
  ProcessSpec s;
  s.kind = kind;
  switch (kind) {
    case ProcessKind::Poisson:
    case ProcessKind::IFS:
    case ProcessKind::BaddeleySilverman:
      break;
    case ProcessKind::Normal:
      s.mu = 0.5;
      s.sigma = 0.2;
      break;
    case ProcessKind::Matern:
      s.mu = 5.0;
      break;
    case ProcessKind::Thomas:
      s.mu = 5.0;
      s.sigma = 0.1;
      break;
  }
  return s;
}

void ProcessSpec::validate() const {
  const std::string name(process_name(kind));
  switch (kind) {
    case ProcessKind::Poisson:
    case ProcessKind::IFS:
      if (!nonnegative(lambda)) throw ParameterError(name + ": lambda must be >= 0");
      break;
    case ProcessKind::Normal:
      if (!nonnegative(lambda)) throw ParameterError(name + ": lambda must be >= 0");
      if (!std::isfinite(mu)) throw ParameterError(name + ": mu must be finite");
      if (!positive(sigma)) throw ParameterError(name + ": sigma must be > 0");
      break;
    case ProcessKind::Matern:
      if (!nonnegative(kappa)) throw ParameterError(name + ": kappa must be >= 0");
      if (!nonnegative(mu)) throw ParameterError(name + ": mu must be >= 0");
      if (!positive(radius)) throw ParameterError(name + ": radius must be > 0");
      break;
    case ProcessKind::Thomas:
      if (!nonnegative(kappa)) throw ParameterError(name + ": kappa must be >= 0");
      if (!nonnegative(mu)) throw ParameterError(name + ": mu must be >= 0");
      if (!positive(sigma)) throw ParameterError(name + ": sigma must be > 0");
      break;
    case ProcessKind::BaddeleySilverman: {
      if (!positive(tile_side) || tile_side > 1.0) throw ParameterError(name + ": tile_side must be in (0, 1]");
      const double tiles = 1.0 / tile_side;
      if (std::abs(tiles - std::round(tiles)) > 1e-9)
        throw ParameterError(name + ": 1/tile_side must be an integer");
      break;
    }
  }
}

std::uint64_t sample_poisson_count(double lambda, Rng& rng) {
  if (!(lambda >= 0.0)) throw ParameterError("poisson count: lambda must be >= 0");
  return rng.poisson(lambda);
}

PointSet gen_poisson(const ProcessSpec& spec, Rng& rng) {
  require_kind(spec, ProcessKind::Poisson);
  PointSet out("", 0, 2);
  const std::uint64_t n = rng.poisson(spec.lambda);
  out.coords.reserve(2 * n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    out.push(x, y);
  }
  return out;
}

PointSet gen_normal(const ProcessSpec& spec, Rng& rng) {
  require_kind(spec, ProcessKind::Normal);
  PointSet out("", 0, 2);
  const std::uint64_t n = rng.poisson(spec.lambda);
  out.coords.reserve(2 * n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = rng.normal(spec.mu, spec.sigma);
    const double y = rng.normal(spec.mu, spec.sigma);
    out.push(x, y);
  }
  return out;
}

PointSet gen_matern(const ProcessSpec& spec, Rng& rng, ClusterTrace* trace) {
  require_kind(spec, ProcessKind::Matern);
  const double r = spec.radius;
  return gen_cluster(spec, rng, trace, [&] {
    // Uniform on the disk: sqrt-radius and uniform angle.
    const double rho = r * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    return Point2{rho * std::cos(theta), rho * std::sin(theta)};
  });
}

PointSet gen_thomas(const ProcessSpec& spec, Rng& rng, ClusterTrace* trace) {
  require_kind(spec, ProcessKind::Thomas);
  const double sd = spec.sigma;
  return gen_cluster(spec, rng, trace, [&] {
    const double dx = rng.normal(0.0, sd);
    const double dy = rng.normal(0.0, sd);
    return Point2{dx, dy};
  });
}

PointSet gen_baddeley_silverman(const ProcessSpec& spec, Rng& rng) {
  require_kind(spec, ProcessKind::BaddeleySilverman);
  const auto tiles = static_cast<std::size_t>(std::llround(1.0 / spec.tile_side));
  const double side = 1.0 / static_cast<double>(tiles);
  constexpr double p0 = 1.0 / 10.0;
  constexpr double p1 = 8.0 / 9.0;
  PointSet out("", 0, 2);
  for (std::size_t row = 0; row < tiles; ++row) {
    for (std::size_t col = 0; col < tiles; ++col) {
      const double u = rng.uniform();
      const int count = u < p0 ? 0 : (u < p0 + p1 ? 1 : 10);
      const double x0 = static_cast<double>(col) * side;
      const double y0 = static_cast<double>(row) * side;
      for (int i = 0; i < count; ++i) {
        const double x = x0 + side * rng.uniform();
        const double y = y0 + side * rng.uniform();
        out.push(x, y);
      }
    }
  }
  return out;
}

Point2 ifs_map(int map_index, Point2 p) {
  const auto [x, y] = p;
  switch (map_index) {
    case 0: return {x / 2.0, y / 2.0};
    case 1: return {x / 2.0 + 0.5, y / 2.0};
    case 2: return {x / 2.0, y / 2.0 + 0.5};
    case 3: return {std::abs(x / 2.0 - 1.0), y / 2.0};
    case 4: return {x / 2.0, std::abs(y / 2.0 - 1.0)};
    default: throw ParameterError("ifs_map: map index must be in 0..4");
  }
}

PointSet gen_ifs(const ProcessSpec& spec, Point2 start, Rng& rng) {
  require_kind(spec, ProcessKind::IFS);
  const auto [sx, sy] = start;
  if (!(sx >= 0.0 && sx <= 1.0 && sy >= 0.0 && sy <= 1.0))
    throw ParameterError("ifs: start point must lie in the unit square");
  PointSet out("", 0, 2);
  const std::uint64_t n = rng.poisson(spec.lambda);
  out.coords.reserve(2 * n);
  Point2 state = start;
  for (std::uint64_t i = 0; i < n; ++i) {
    // Map weights (1/3, 1/6, 1/6, 1/6, 1/6): u in [0,1/3) -> 0, then bands of 1/6.
    const double u = rng.uniform();
    const int map = u < 1.0 / 3.0 ? 0 : std::min(4, 1 + static_cast<int>((u - 1.0 / 3.0) * 6.0));
    state = ifs_map(map, state);
    out.push(state.first, state.second);
  }
  return out;
}

PointSet generate(const ProcessSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case ProcessKind::Poisson: return gen_poisson(spec, rng);
    case ProcessKind::Normal: return gen_normal(spec, rng);
    case ProcessKind::Matern: return gen_matern(spec, rng);
    case ProcessKind::Thomas: return gen_thomas(spec, rng);
    case ProcessKind::BaddeleySilverman: return gen_baddeley_silverman(spec, rng);
    case ProcessKind::IFS: return gen_ifs(spec, {0.5, 0.5}, rng);
  }
  throw ParameterError("unknown process kind");
}

Dataset gen_dataset(const std::vector<ClassSpec>& classes, std::uint64_t seed) {
  if (classes.empty()) throw ParameterError("gen_dataset: no classes given");
  Dataset data;
  data.feature_names = {"x", "y"};
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassSpec& cs = classes[c];
    if (cs.examples == 0) throw ParameterError("gen_dataset: examples per class must be >= 1");
    cs.process.validate();
    std::string name(process_name(cs.process.kind));
    for (const auto& existing : data.class_names)
      if (existing == name) name += "_" + std::to_string(c);
    data.class_names.push_back(name);
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassSpec& cs = classes[c];
    const std::string prefix(process_name(cs.process.kind));
    for (std::size_t e = 0; e < cs.examples; ++e) {
      Rng rng(mix_seed({seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(e)}));
      PointSet ps = generate(cs.process, rng);
      ps.sample_id = prefix + "_" + std::to_string(c) + "_" + std::to_string(e);
      ps.label = static_cast<int>(c);
      data.samples.push_back(std::move(ps));
    }
  }
  return data;
}

}  // namespace mmtda::ppgen
