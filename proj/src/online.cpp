#include "sixdma/online.hpp"

#include "sixdma/parallel.hpp"
#include "sixdma/random.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace sixdma {

std::vector<SampleSet> sample_sets(int M, int L, int B, int T, std::uint64_t seed) {
  if (B < 1 || M < B) throw std::invalid_argument("sample_sets: need 1 <= B <= M");
  if (L < 1 || T < 1) throw std::invalid_argument("sample_sets: need L >= 1 and T >= 1");
  Rng rng(derive_seed(seed, {0x5a3b1e}));
  std::uniform_int_distribution<int> rotation(0, L - 1);
  std::vector<int> all(M);
  std::iota(all.begin(), all.end(), 0);
  std::vector<SampleSet> out(T);
  for (int t = 0; t < T; ++t) {
    auto& s = out[t];
    s.t = t;
    // partial Fisher-Yates: the first B entries are a uniform B-subset
    for (int b = 0; b < B; ++b) {
      const int k = std::uniform_int_distribution<int>(b, M - 1)(rng);
      std::swap(all[b], all[k]);
      s.positions.push_back(all[b]);
      s.rotations.push_back(rotation(rng));
    }
  }
  return out;
}

std::vector<SampleSet> sample_sets(const PoseCodebook& codebook, int B, int T, std::uint64_t seed) {
  return sample_sets(codebook.num_positions(), codebook.num_rotations(), B, T, seed);
}

UserRealization MeasurementEnvironment::users(int t) const {
  const std::uint64_t tag = population == Population::Frozen ? ~0ULL : static_cast<std::uint64_t>(t);
  return sample_realization(scenario, derive_seed(seed, {0xe7a1, tag}));
}

double MeasurementEnvironment::measure(const SampleSet& sample) const {
  if (!codebook) throw std::logic_error("measure: environment has no codebook");
  std::vector<SurfacePose> poses;
  for (std::size_t b = 0; b < sample.positions.size(); ++b) {
    poses.push_back(codebook->pose(sample.positions[b], sample.rotations[b]));
  }
  const auto paths = los_paths(users(sample.t), system.wavelength);
  return sum_rate(channel_matrix(poses, paths, layout, pattern, system.wavelength), system.snr());
}

CsmTable build_csm_table(const std::vector<SampleSet>& samples, int M, int L) {
  CsmTable table;
  table.M = M;
  table.L = L;
  table.mean = Eigen::MatrixXd::Zero(M, L);
  table.count = Eigen::MatrixXi::Zero(M, L);
  table.members.assign(static_cast<std::size_t>(M) * L, {});
  std::vector<const SampleSet*> by_t;
  for (const auto& s : samples) by_t.push_back(&s);
  std::stable_sort(by_t.begin(), by_t.end(), [](auto* a, auto* b) { return a->t < b->t; });
  for (const SampleSet* s : by_t) {
    for (std::size_t b = 0; b < s->positions.size(); ++b) {
      const int m = s->positions[b], l = s->rotations[b];
      if (m < 0 || m >= M || l < 0 || l >= L) throw std::invalid_argument("csm: index out of range");
      table.members[m * L + l].push_back(s->t);
      table.mean(m, l) += s->value;
      table.count(m, l) += 1;
    }
  }
  for (int m = 0; m < M; ++m) {
    for (int l = 0; l < L; ++l) {
      if (table.count(m, l) > 0) table.mean(m, l) /= table.count(m, l);
    }
  }
  return table;
}

IndicatorState csm_select(const CsmTable& table, int B) {
  if (B < 1 || B > table.M) throw std::invalid_argument("csm_select: need 1 <= B <= M");
  std::vector<int> phi(table.M);
  Eigen::VectorXd je(table.M);
  for (int m = 0; m < table.M; ++m) {
    Eigen::Index l = 0;
    je(m) = table.mean.row(m).maxCoeff(&l);
    phi[m] = static_cast<int>(l);
  }
  std::vector<int> order(table.M);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return je(a) > je(b); });
  IndicatorState out{table.M, table.L, {}, {}};
  for (int b = 0; b < B; ++b) {
    out.positions.push_back(order[b]);
    out.rotations.push_back(phi[order[b]]);
  }
  return out;
}

OnlineResult optimize_csm(const PoseCodebook& codebook, int B, int T, std::uint64_t seed,
                          const Measurement& measure, int threads) {
  const auto start = std::chrono::steady_clock::now();
  OnlineResult out;
  out.samples = sample_sets(codebook, B, T, seed);
  parallel_for(
      out.samples.size(), [&](std::size_t t) { out.samples[t].value = measure(out.samples[t]); },
      threads);
  out.table = build_csm_table(out.samples, codebook.num_positions(), codebook.num_rotations());
  out.selection = csm_select(out.table, B);
  out.feasibility = check_feasible(out.selection, build_constraint_data(codebook));
  out.divergence = divergence(out.feasibility, check_feasible_geometric(out.selection, codebook));
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_csm_csv(std::ostream& out, const CsmTable& table) {
  out << "m,l,count,mean\n" << std::setprecision(12);
  for (int m = 0; m < table.M; ++m) {
    for (int l = 0; l < table.L; ++l) {
      out << m + 1 << ',' << l + 1 << ',' << table.count(m, l) << ',' << table.mean(m, l) << '\n';
    }
  }
}

void write_samples_csv(std::ostream& out, const std::vector<SampleSet>& samples) {
  out << "t,b,position,rotation,value\n" << std::setprecision(12);
  for (const auto& s : samples) {
    for (std::size_t b = 0; b < s.positions.size(); ++b) {
      out << s.t + 1 << ',' << b + 1 << ',' << s.positions[b] + 1 << ',' << s.rotations[b] + 1 << ','
          << s.value << '\n';
    }
  }
}

}  // namespace sixdma
