#include "mmtda/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "mmtda/error.hpp"

namespace mmtda {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::size_t Dataset::min_sample_size() const {
  if (samples.empty()) return 0;
  std::size_t m = samples.front().size();
  for (const auto& s : samples) m = std::min(m, s.size());
  return m;
}

void Dataset::validate() const {
  const std::size_t d = dim();
  if (d == 0) throw PreconditionError("dataset has no features");
  std::unordered_set<std::string> ids;
  for (const auto& s : samples) {
    if (s.dim != d)
      throw PreconditionError("sample '" + s.sample_id + "' has dimension " + std::to_string(s.dim) +
                              ", expected " + std::to_string(d));
    if (s.empty()) throw PreconditionError("sample '" + s.sample_id + "' has no datapoints");
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= num_classes())
      throw PreconditionError("sample '" + s.sample_id + "' has label outside 0.." +
                              std::to_string(num_classes()));
    if (!ids.insert(s.sample_id).second)
      throw PreconditionError("duplicate sample id '" + s.sample_id + "'");
  }
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");

  const std::string where = path.string();
  std::string line;
  std::size_t lineno = 0;

  // Header; blank lines before it are tolerated.
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, header_line)) {
    ++lineno;
    if (!trim(header_line).empty()) break;
  }
  if (trim(header_line).empty()) throw ParseError(where, 0, "empty file");
  if (header_line.size() >= 3 && header_line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    header_line.erase(0, 3);
  header = split_fields(header_line);
  if (header.size() < 3 || header[0] != "sample_id" || header[1] != "label")
    throw ParseError(where, lineno,
                     "header must be 'sample_id,label,<feature>...' with at least one feature");

  Dataset data;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].empty()) throw ParseError(where, lineno, "empty feature name in column " + std::to_string(c + 1));
    data.feature_names.emplace_back(header[c]);
  }
  const std::size_t d = data.feature_names.size();

  std::unordered_map<std::string, std::size_t> sample_index;
  std::unordered_map<std::string, int> label_index;
  std::vector<double> row(d);

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != d + 2)
      throw ParseError(where, lineno,
                       "expected " + std::to_string(d + 2) + " fields, found " + std::to_string(fields.size()));
    if (fields[0].empty()) throw ParseError(where, lineno, "empty sample_id");
    if (fields[1].empty()) throw ParseError(where, lineno, "empty label");
    for (std::size_t c = 0; c < d; ++c) {
      if (!parse_double(fields[c + 2], row[c]))
        throw ParseError(where, lineno,
                         "non-numeric value '" + std::string(fields[c + 2]) + "' in column '" +
                             data.feature_names[c] + "'");
    }

    const std::string label_name(fields[1]);
    auto [lit, new_label] = label_index.try_emplace(label_name, static_cast<int>(data.class_names.size()));
    if (new_label) data.class_names.push_back(label_name);

    const std::string id(fields[0]);
    auto [sit, new_sample] = sample_index.try_emplace(id, data.samples.size());
    if (new_sample) data.samples.emplace_back(id, lit->second, d);
    PointSet& ps = data.samples[sit->second];
    if (ps.label != lit->second)
      throw ParseError(where, lineno,
                       "sample '" + id + "' has label '" + label_name + "' but was first seen with '" +
                           data.class_names[ps.label] + "'");
    ps.push(row);
  }
  if (data.samples.empty()) throw ParseError(where, 0, "no data rows");
  return data;
}

void write_csv(const Dataset& data, std::ostream& out) {
  out << "sample_id,label";
  for (const auto& f : data.feature_names) out << ',' << f;
  out << '\n';
  for (const auto& s : data.samples) {
    const std::string& label = data.class_names.at(static_cast<std::size_t>(s.label));
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << s.sample_id << ',' << label;
      for (double v : s.point(i)) out << ',' << format_g17(v);
      out << '\n';
    }
  }
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_csv(data, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

SampledData subsample(const Dataset& data, std::size_t k, Rng& rng) {
  if (k == 0) throw PreconditionError("subsample: k must be positive");
  const std::size_t d = data.dim();
  for (const auto& s : data.samples) {
    if (s.size() < k)
      throw PreconditionError("subsample: k=" + std::to_string(k) + " exceeds the " + std::to_string(s.size()) +
                              " datapoints of sample '" + s.sample_id + "'");
  }

  SampledData out;
  out.dim = d;
  out.k = k;
  out.num_classes = data.num_classes();
  out.coords.reserve(data.samples.size() * k * d);
  out.owner.reserve(data.samples.size() * k);
  out.labels.reserve(data.samples.size());

  std::vector<std::size_t> idx;
  for (std::size_t si = 0; si < data.samples.size(); ++si) {
    const PointSet& s = data.samples[si];
    idx.resize(s.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k slots become a uniform k-subset in random order.
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto p = s.point(idx[i]);
      out.coords.insert(out.coords.end(), p.begin(), p.end());
      out.owner.push_back(static_cast<int>(si));
    }
    out.labels.push_back(s.label);
  }
  return out;
}

SampledData standardize(const SampledData& sampled) {
  SampledData out = sampled;
  const std::size_t n = sampled.size();
  const std::size_t d = sampled.dim;
  if (n < 2) return out;
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    double lo = sampled.coords[c], hi = lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = sampled.coords[i * d + c];
      mean += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = sampled.coords[i * d + c] - mean;
      ss += dv * dv;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    const bool constant = lo == hi || !(sd > 1e-300);
    for (std::size_t i = 0; i < n; ++i) {
      double& v = out.coords[i * d + c];
      v = constant ? 0.0 : (sampled.coords[i * d + c] - mean) / sd;
    }
  }
  return out;
}

}  // namespace mmtda
