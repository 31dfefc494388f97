// Synthetic flow-record generator.
//
// Rows are drawn from a handful of traffic profiles. Each profile occupies
// its own region of feature space (volume features, address pools, ports,
// protocol mix), and inside each region the rare normal flows sit in a
// profile-specific local pattern that a single global model handles poorly
// but a per-region specialist handles well. See ProfileShape for the three
// patterns.

#include "hcad/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcad/csv.hpp"
#include "hcad/rng.hpp"

namespace hcad {

namespace {

constexpr std::uint64_t kSynthSalt = 0x73796e7468ULL;  // "synth"
constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ULL;  // "noise"
constexpr std::uint64_t kShuffleSalt = 0x73687566ULL;  // "shuf"

// Offset added to the behavioural features (dur, rate, srate, drate) so the
// generated values sit in a plausible positive range.
constexpr double kBehaviourBase = 10.0;

// Fraction of source ports rendered in hex (Bot-IoT style "0x0303" cells);
// the rest are plain decimal.
constexpr double kHexPortFraction = 0.3;

// --- kLinear: normals form a band along the diagonal of (dur, rate),
// offset from the attack cloud by an empty margin.
constexpr double kBandCenter = 2.8;     // band offset along (1,1)/sqrt(2)
constexpr double kBandHalfWidth = 0.8;  // margin carved out of the attacks
constexpr double kBandHalfLength = 2.6;
constexpr double kBandJitter = 0.15;
// The attack carve-out extends a little past the normals' band ends.
constexpr double kBandCarveHalfLength = 3.0;

// --- kAxis: corners of a cube at +-kCorner; attacks take the even-parity
// corners, normals the odd ones.
constexpr double kCorner = 1.6;
constexpr double kAttackCornerSigma = 0.4;
constexpr double kNormalCornerSigma = 0.18;
constexpr double kCornerMargin = 0.7;

// --- kLocal: normals in tight pockets carved out of a gaussian attack
// cloud in (dur, rate).
constexpr double kPocketRadius = 2.6;  // pocket centre distance from origin
constexpr double kPocketSigma = 0.16;
constexpr double kPocketMargin = 0.75;

// Noise scale of the behavioural features that carry no signal for a given
// class: attacks spread wide, normals stay tight.
constexpr double kAttackNoiseSigma = 1.0;
constexpr double kNormalNoiseSigma = 0.35;

struct ShapePoint {
  double dur = 0.0;
  double rate = 0.0;
  double srate = 0.0;
  bool srate_from_shape = false;  // kAxis uses all three coordinates
};

ShapePoint draw_linear(Rng& rng, bool attack) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  ShapePoint p;
  if (attack) {
    double x = 0.0, y = 0.0;
    for (;;) {
      x = rng.next_normal();
      y = rng.next_normal();
      const double along = (x + y) * kInvSqrt2;
      const double across = (x - y) * kInvSqrt2;
      if (std::abs(along - kBandCenter) >= kBandHalfWidth ||
          std::abs(across) >= kBandCarveHalfLength) {
        break;
      }
    }
    p.dur = x;
    p.rate = y;
  } else {
    const double across =
        -kBandHalfLength + 2.0 * kBandHalfLength * rng.next_unit();
    const double along = kBandCenter + kBandJitter * rng.next_normal();
    p.dur = (along + across) * kInvSqrt2;
    p.rate = (along - across) * kInvSqrt2;
  }
  return p;
}

ShapePoint draw_axis(Rng& rng, bool attack) {
  // Corner index bits give the signs; attacks sit where the sign parity is
  // even, normals where it is odd, so no single coordinate separates them.
  static constexpr std::array<int, 4> kEven = {0, 3, 5, 6};
  static constexpr std::array<int, 4> kOdd = {1, 2, 4, 7};

  const auto corner_coord = [](int corner, int axis) {
    return ((corner >> axis) & 1) ? kCorner : -kCorner;
  };

  const int corner = attack ? kEven[rng.next_index(4)]
                            : kOdd[rng.next_index(4)];
  const double sigma = attack ? kAttackCornerSigma : kNormalCornerSigma;
  std::array<double, 3> z{};
  for (;;) {
    for (int axis = 0; axis < 3; ++axis) {
      z[static_cast<std::size_t>(axis)] =
          corner_coord(corner, axis) + sigma * rng.next_normal();
    }
    if (!attack) break;
    // Keep attack mass out of the normals' corners.
    bool near_odd = false;
    for (const int other : kOdd) {
      double d2 = 0.0;
      for (int axis = 0; axis < 3; ++axis) {
        const double diff =
            z[static_cast<std::size_t>(axis)] - corner_coord(other, axis);
        d2 += diff * diff;
      }
      if (d2 < kCornerMargin * kCornerMargin) {
        near_odd = true;
        break;
      }
    }
    if (!near_odd) break;
  }
  ShapePoint p;
  p.dur = z[0];
  p.rate = z[1];
  p.srate = z[2];
  p.srate_from_shape = true;
  return p;
}

ShapePoint draw_local(Rng& rng, bool attack) {
  // Pocket centres at 90, 210 and 330 degrees; the off-axis ones use
  // sqrt(3)/2 so no libm trig is involved.
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  const std::array<std::array<double, 2>, 3> centers = {{
      {0.0, kPocketRadius},
      {-kPocketRadius * half_sqrt3, -kPocketRadius * 0.5},
      {kPocketRadius * half_sqrt3, -kPocketRadius * 0.5},
  }};

  ShapePoint p;
  if (attack) {
    for (;;) {
      const double x = rng.next_normal();
      const double y = rng.next_normal();
      bool near_pocket = false;
      for (const auto& c : centers) {
        const double dx = x - c[0];
        const double dy = y - c[1];
        if (dx * dx + dy * dy < kPocketMargin * kPocketMargin) {
          near_pocket = true;
          break;
        }
      }
      if (!near_pocket) {
        p.dur = x;
        p.rate = y;
        break;
      }
    }
  } else {
    const auto& c = centers[rng.next_index(3)];
    p.dur = c[0] + kPocketSigma * rng.next_normal();
    p.rate = c[1] + kPocketSigma * rng.next_normal();
  }
  return p;
}

ShapePoint draw_shape(ProfileShape shape, Rng& rng, bool attack) {
  switch (shape) {
    case ProfileShape::kLinear: return draw_linear(rng, attack);
    case ProfileShape::kAxis: return draw_axis(rng, attack);
    case ProfileShape::kLocal: return draw_local(rng, attack);
  }
  throw std::logic_error("draw_shape: unhandled shape");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string pick_weighted(const std::vector<std::pair<std::string, double>>& mix,
                          Rng& rng) {
  double total = 0.0;
  for (const auto& [value, weight] : mix) total += weight;
  const double target = rng.next_unit() * total;
  double cum = 0.0;
  for (const auto& [value, weight] : mix) {
    cum += weight;
    if (target < cum) return value;
  }
  return mix.back().first;
}

std::string render_sport(const SynthProfile& profile, Rng& rng) {
  const auto span =
      static_cast<std::size_t>(profile.sport_high - profile.sport_low + 1);
  const long long port =
      profile.sport_low + static_cast<long long>(rng.next_index(span));
  const bool hex = rng.next_unit() < kHexPortFraction;
  if (!hex) return std::to_string(port);
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), port, 16);
  return "0x" + std::string(buf, res.ptr);
}

// Splits total into one integer share per weight, largest-remainder style:
// exact shares are floored and the leftover units go to the largest
// fractional parts (ties to the lower index).
std::vector<std::size_t> allocate_rows(std::size_t total,
                                       const std::vector<double>& weights) {
  double weight_sum = 0.0;
  for (const double w : weights) weight_sum += w;

  std::vector<std::size_t> shares(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> fractional;  // (-frac, index)
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact =
        static_cast<double>(total) * weights[i] / weight_sum;
    const double floored = std::floor(exact);
    shares[i] = static_cast<std::size_t>(floored);
    assigned += shares[i];
    fractional.emplace_back(-(exact - floored), i);
  }
  std::sort(fractional.begin(), fractional.end());
  std::size_t leftover = total - assigned;
  for (std::size_t j = 0; leftover > 0; ++j, --leftover) {
    shares[fractional[j % fractional.size()].second]++;
  }
  return shares;
}

SynthProfile make_linear_profile() {
  SynthProfile p;
  p.shape = ProfileShape::kLinear;
  p.weight = 1.0;
  p.location = {20.0, 20.0, 60.0};
  p.proto_mix = {{"tcp", 0.8}, {"udp", 0.2}};
  p.saddr_pool = {"192.168.100.10", "192.168.100.11", "192.168.100.12",
                  "192.168.100.13"};
  p.daddr_pool = {"10.0.0.1", "10.0.0.2", "10.0.0.3"};
  p.dport_pool = {80, 443};
  p.sport_low = 1024;
  p.sport_high = 8191;
  return p;
}

SynthProfile make_axis_profile() {
  SynthProfile p;
  p.shape = ProfileShape::kAxis;
  p.weight = 1.0;
  p.location = {60.0, 20.0, 20.0};
  p.proto_mix = {{"udp", 0.7}, {"icmp", 0.3}};
  p.saddr_pool = {"192.168.101.20", "192.168.101.21", "192.168.101.22",
                  "192.168.101.23"};
  p.daddr_pool = {"10.0.1.1", "10.0.1.2", "10.0.1.3"};
  p.dport_pool = {5353, 5683};
  p.sport_low = 30000;
  p.sport_high = 39999;
  return p;
}

SynthProfile make_local_profile() {
  SynthProfile p;
  p.shape = ProfileShape::kLocal;
  p.weight = 1.0;
  p.location = {20.0, 60.0, 20.0};
  p.proto_mix = {{"tcp", 0.6}, {"arp", 0.4}};
  p.saddr_pool = {"192.168.102.30", "192.168.102.31", "192.168.102.32",
                  "192.168.102.33"};
  p.daddr_pool = {"10.0.2.1", "10.0.2.2", "10.0.2.3"};
  p.dport_pool = {1883, 1884};
  p.sport_low = 50000;
  p.sport_high = 59999;
  return p;
}

std::vector<SynthProfile> standard_profiles() {
  return {make_linear_profile(), make_axis_profile(), make_local_profile()};
}

}  // namespace

std::string to_string(ProfileShape shape) {
  switch (shape) {
    case ProfileShape::kLinear: return "linear";
    case ProfileShape::kAxis: return "axis";
    case ProfileShape::kLocal: return "local";
  }
  throw std::invalid_argument("unknown profile shape");
}

void SynthConfig::validate() const {
  if (n_rows == 0) {
    throw std::invalid_argument("synth config: n_rows must be positive");
  }
  if (!(normal_fraction > 0.0 && normal_fraction < 1.0)) {
    throw std::invalid_argument(
        "synth config: normal_fraction must be in (0, 1)");
  }
  if (!(label_noise >= 0.0 && label_noise < 1.0)) {
    throw std::invalid_argument(
        "synth config: label_noise must be in [0, 1)");
  }
  if (profiles.empty()) {
    throw std::invalid_argument("synth config: at least one profile");
  }
  for (const SynthProfile& p : profiles) {
    if (!(p.weight > 0.0)) {
      throw std::invalid_argument("synth config: profile weight must be > 0");
    }
    if (p.proto_mix.empty() || p.saddr_pool.empty() || p.daddr_pool.empty() ||
        p.dport_pool.empty()) {
      throw std::invalid_argument(
          "synth config: profile pools must not be empty");
    }
    for (const auto& [value, weight] : p.proto_mix) {
      if (!(weight > 0.0)) {
        throw std::invalid_argument(
            "synth config: proto weights must be > 0");
      }
    }
    if (p.sport_low < 0 || p.sport_low > p.sport_high) {
      throw std::invalid_argument("synth config: bad sport range");
    }
  }
}

SynthConfig SynthConfig::hetero3(std::size_t n_rows, double normal_fraction,
                                 std::uint64_t seed) {
  SynthConfig config;
  config.n_rows = n_rows;
  config.normal_fraction = normal_fraction;
  config.seed = seed;
  config.profiles = standard_profiles();
  config.validate();
  if (static_cast<double>(n_rows) * normal_fraction < 20.0) {
    throw std::invalid_argument(
        "hetero3: needs at least 20 expected normal rows to populate three "
        "profiles");
  }
  return config;
}

SynthConfig SynthConfig::botiot_imbalance(std::size_t n_rows,
                                          std::uint64_t seed) {
  SynthConfig config;
  config.n_rows = n_rows;
  config.normal_fraction = 0.00013;  // 13 normal rows per 100k
  config.seed = seed;
  config.profiles = standard_profiles();
  config.validate();
  return config;
}

SynthResult generate(const SynthConfig& config) {
  config.validate();

  std::vector<double> weights;
  weights.reserve(config.profiles.size());
  for (const SynthProfile& p : config.profiles) weights.push_back(p.weight);

  const auto rows_per_profile = allocate_rows(config.n_rows, weights);
  const auto normal_total = static_cast<std::size_t>(std::llround(
      static_cast<double>(config.n_rows) * config.normal_fraction));
  if (normal_total < 2) {
    throw std::invalid_argument(
        "generate: configuration yields fewer than 2 normal rows");
  }
  const auto normals_per_profile = allocate_rows(normal_total, weights);
  for (std::size_t p = 0; p < config.profiles.size(); ++p) {
    if (normals_per_profile[p] > rows_per_profile[p]) {
      throw std::invalid_argument(
          "generate: profile " + std::to_string(p) +
          " has more normal rows than total rows");
    }
  }

  // Columns after the two sequence ids, before the label.
  struct PendingRow {
    std::array<std::string, 12> cells;
    int label = 0;
    int profile = 0;
  };
  std::vector<PendingRow> pending;
  pending.reserve(config.n_rows);

  for (std::size_t p = 0; p < config.profiles.size(); ++p) {
    const SynthProfile& profile = config.profiles[p];
    // Normals first, then attacks, each class from its own stream so the
    // attack draws cannot disturb the normals when counts change.
    for (const int label : {0, 1}) {
      const bool attack = label == 1;
      const std::size_t count = attack
                                    ? rows_per_profile[p] - normals_per_profile[p]
                                    : normals_per_profile[p];
      Rng rng(derive_seed(config.seed, kSynthSalt,
                          p * 2 + static_cast<std::size_t>(label)));
      const double noise_sigma =
          attack ? kAttackNoiseSigma : kNormalNoiseSigma;

      for (std::size_t i = 0; i < count; ++i) {
        const ShapePoint shape = draw_shape(profile.shape, rng, attack);
        const double srate =
            shape.srate_from_shape ? shape.srate
                                   : noise_sigma * rng.next_normal();
        const double drate = noise_sigma * rng.next_normal();
        const long long pkts = std::max<long long>(
            0, std::llround(profile.location[0] + rng.next_normal()));
        const long long bytes = std::max<long long>(
            0, std::llround(60.0 * (profile.location[1] + rng.next_normal())));
        const long long spkts = std::max<long long>(
            0, std::llround(profile.location[2] + rng.next_normal()));

        PendingRow row;
        row.label = label;
        row.profile = static_cast<int>(p);
        row.cells[0] = pick_weighted(profile.proto_mix, rng);
        row.cells[1] = profile.saddr_pool[rng.next_index(
            profile.saddr_pool.size())];
        row.cells[2] = render_sport(profile, rng);
        row.cells[3] = profile.daddr_pool[rng.next_index(
            profile.daddr_pool.size())];
        row.cells[4] = std::to_string(profile.dport_pool[rng.next_index(
            profile.dport_pool.size())]);
        row.cells[5] = format_double(kBehaviourBase + shape.dur);
        row.cells[6] = format_double(kBehaviourBase + shape.rate);
        row.cells[7] = format_double(kBehaviourBase + srate);
        row.cells[8] = format_double(kBehaviourBase + drate);
        row.cells[9] = std::to_string(pkts);
        row.cells[10] = std::to_string(bytes);
        row.cells[11] = std::to_string(spkts);
        pending.push_back(std::move(row));
      }
    }
  }

  if (config.label_noise > 0.0) {
    Rng noise_rng(derive_seed(config.seed, kNoiseSalt));
    for (PendingRow& row : pending) {
      if (noise_rng.next_unit() < config.label_noise) {
        row.label = 1 - row.label;
      }
    }
  }

  std::vector<std::size_t> order(pending.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(config.seed, kShuffleSalt));
  shuffle_rng.shuffle(order);

  SynthResult result;
  result.table.column_names = {"pkSeqID", "seq",   "proto", "saddr", "sport",
                               "daddr",   "dport", "dur",   "rate",  "srate",
                               "drate",   "pkts",  "bytes", "spkts", "attack"};
  result.table.rows.reserve(pending.size());
  result.labels.reserve(pending.size());
  result.profile_ids.reserve(pending.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const PendingRow& row = pending[order[i]];
    std::vector<std::string> cells;
    cells.reserve(15);
    cells.push_back(std::to_string(i + 1));     // pkSeqID
    cells.push_back(std::to_string(i + 1000));  // seq
    for (const std::string& cell : row.cells) cells.push_back(cell);
    cells.push_back(std::to_string(row.label));
    result.table.rows.push_back(std::move(cells));
    result.labels.push_back(row.label);
    result.profile_ids.push_back(row.profile);
  }
  return result;
}

SchemaConfig synth_schema() {
  SchemaConfig schema;
  schema.label_column = "attack";
  schema.positive_label_values = {"1"};
  schema.drop_columns = {"pkSeqID", "seq"};
  schema.categorical_columns = {"proto", "saddr", "daddr"};
  schema.port_columns = {"sport", "dport"};
  return schema;
}

void write_rows_csv(const RawTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  csv::write_record(out, table.column_names);
  for (const auto& row : table.rows) csv::write_record(out, row);
}

void write_profile_sidecar(const std::vector<int>& profile_ids,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << "row,profile\n";
  for (std::size_t i = 0; i < profile_ids.size(); ++i) {
    out << i << ',' << profile_ids[i] << '\n';
  }
}

}  // namespace hcad
