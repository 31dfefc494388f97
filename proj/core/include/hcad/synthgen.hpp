#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hcad/flowdata.hpp"

namespace hcad {

// The local decision structure of one traffic profile, i.e. how its normal
// flows sit inside its attack mass. The three shapes favour different
// classifier families:
//   kLinear - normals form a diagonal band offset from the attack core,
//             separated by an empty margin (oblique boundary);
//   kAxis   - normals occupy the odd-parity corners of an axis-aligned
//             cube, attacks the even ones (no single feature carries any
//             signal, so greedy marginal splits start blind);
//   kLocal  - normals sit in a few tight pockets carved out of the attack
//             cloud (purely local structure).
enum class ProfileShape { kLinear, kAxis, kLocal };

std::string to_string(ProfileShape shape);

struct SynthProfile {
  ProfileShape shape = ProfileShape::kLinear;
  double weight = 1.0;  // share of generated rows
  // Offsets of the three volume features (pkts, bytes, spkts); these are
  // the coordinates that keep profiles apart in feature space.
  std::array<double, 3> location{};
  // Categorical flavour of the profile's traffic.
  std::vector<std::pair<std::string, double>> proto_mix;  // value, weight
  std::vector<std::string> saddr_pool;
  std::vector<std::string> daddr_pool;
  std::vector<long long> dport_pool;
  long long sport_low = 1024;
  long long sport_high = 65535;
};

struct SynthConfig {
  std::size_t n_rows = 50000;
  double normal_fraction = 0.005;  // share of rows labeled normal
  double label_noise = 0.0;        // probability of flipping each label
  std::uint64_t seed = 7;
  std::vector<SynthProfile> profiles;

  void validate() const;

  // Three well-separated profiles, one per shape, sized so that roughly
  // normal_fraction * n_rows normals spread evenly across them. The preset
  // requires at least 20 expected normal rows.
  static SynthConfig hetero3(std::size_t n_rows = 50000,
                             double normal_fraction = 0.005,
                             std::uint64_t seed = 7);
  // Same geometry at the raw Bot-IoT imbalance (0.013% normal traffic).
  static SynthConfig botiot_imbalance(std::size_t n_rows = 100000,
                                      std::uint64_t seed = 7);
};

struct SynthResult {
  RawTable table;
  std::vector<int> labels;       // per row, after label noise
  std::vector<int> profile_ids;  // per row
};

// Deterministic generation: identical configs give byte-identical CSV
// output. Fails if the config yields fewer than 2 normal rows in total
// (SMOTE downstream would be impossible even in principle).
SynthResult generate(const SynthConfig& config);

// The schema matching generated tables (drops pkSeqID/seq, label column
// "attack" with positive value "1", categorical proto/saddr/daddr, ports
// sport/dport).
SchemaConfig synth_schema();

void write_rows_csv(const RawTable& table, const std::string& path);
// Sidecar mapping each 0-based row index to its generating profile.
void write_profile_sidecar(const std::vector<int>& profile_ids,
                           const std::string& path);

}  // namespace hcad
