#pragma once
// Shared test fixtures: a CMU-topology skeleton, a synthetic walking motion
// generator with per-subject style, temporary directories, and independent
// brute-force oracles the library results are compared against.

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gaitrec/motion.hpp"
#include "gaitrec/sample.hpp"
#include "gaitrec/skeleton.hpp"
#include "gaitrec/text.hpp"

namespace testsupport {

namespace fs = std::filesystem;

struct BoneSpec {
  const char* name;
  double dx, dy, dz, length;
  double ax, ay, az;
  const char* dof;
};

// The 30 bones of a CMU skeleton, with plausible directions and lengths.
inline const std::vector<BoneSpec>& cmu_bones() {
  static const std::vector<BoneSpec> bones = {
      {"lhipjoint", 0.66, -0.69, 0.29, 2.4, 0, 0, 0, ""},
      {"lfemur", 0.34, -0.94, 0, 7.2, 0, 0, 20, "rx ry rz"},
      {"ltibia", 0.34, -0.94, 0, 7.4, 0, 0, 20, "rx"},
      {"lfoot", -0.04, -0.24, 0.97, 2.3, -90, 7, 20, "rx rz"},
      {"ltoes", 0, 0, 1, 1.2, -90, 7, 20, "rx"},
      {"rhipjoint", -0.66, -0.69, 0.29, 2.4, 0, 0, 0, ""},
      {"rfemur", -0.34, -0.94, 0, 7.2, 0, 0, -20, "rx ry rz"},
      {"rtibia", -0.34, -0.94, 0, 7.4, 0, 0, -20, "rx"},
      {"rfoot", 0.04, -0.24, 0.97, 2.3, -90, -7, -20, "rx rz"},
      {"rtoes", 0, 0, 1, 1.2, -90, -7, -20, "rx"},
      {"lowerback", 0.01, 0.99, -0.06, 2.0, 0, 0, 0, "rx ry rz"},
      {"upperback", 0, 1, 0.01, 2.0, 0, 0, 0, "rx ry rz"},
      {"thorax", 0, 1, 0.01, 2.0, 0, 0, 0, "rx ry rz"},
      {"lowerneck", 0, 0.92, -0.38, 1.6, 0, 0, 0, "rx ry rz"},
      {"upperneck", 0, 0.98, -0.17, 1.6, 0, 0, 0, "rx ry rz"},
      {"head", 0, 0.98, -0.17, 1.6, 0, 0, 0, "rx ry rz"},
      {"lclavicle", 0.93, 0.36, -0.05, 3.6, 0, 0, 0, "ry rz"},
      {"lhumerus", 1, 0, 0, 5.0, 0, 0, 90, "rx ry rz"},
      {"lradius", 1, 0, 0, 3.4, 0, 0, 90, "rx"},
      {"lwrist", 1, 0, 0, 1.7, 0, 0, 90, "ry"},
      {"lhand", 1, 0, 0, 0.7, 0, 0, 90, "rx rz"},
      {"lfingers", 1, 0, 0, 0.5, 0, 0, 90, "rx"},
      {"lthumb", 0.71, 0, 0.71, 0.7, -90, 45, 0, "rx rz"},
      {"rclavicle", -0.93, 0.36, -0.05, 3.6, 0, 0, 0, "ry rz"},
      {"rhumerus", -1, 0, 0, 5.0, 0, 0, -90, "rx ry rz"},
      {"rradius", -1, 0, 0, 3.4, 0, 0, -90, "rx"},
      {"rwrist", -1, 0, 0, 1.7, 0, 0, -90, "ry"},
      {"rhand", -1, 0, 0, 0.7, 0, 0, -90, "rx rz"},
      {"rfingers", -1, 0, 0, 0.5, 0, 0, -90, "rx"},
      {"rthumb", -0.71, 0, 0.71, 0.7, -90, -45, 0, "rx rz"},
  };
  return bones;
}

// CMU-style ASF; `scale` multiplies every bone length.
inline std::string cmu_asf(double scale = 1.0) {
  std::ostringstream o;
  o << "# synthetic CMU topology\n:version 1.10\n:name VICON\n:units\n  mass 1.0\n  length 0.45\n  angle deg\n"
    << ":documentation\n  test skeleton\n"
    << ":root\n   order TX TY TZ RX RY RZ\n   axis XYZ\n   position 0 0 0\n   orientation 0 0 0\n:bonedata\n";
  int id = 1;
  for (const auto& b : cmu_bones()) {
    const double n = std::sqrt(b.dx * b.dx + b.dy * b.dy + b.dz * b.dz);
    o << "  begin\n     id " << id++ << "\n     name " << b.name << "\n     direction " << b.dx / n << ' '
      << b.dy / n << ' ' << b.dz / n << "\n     length " << b.length * scale << "\n     axis " << b.ax << ' ' << b.ay
      << ' ' << b.az << "  XYZ\n";
    if (*b.dof) o << "    dof " << b.dof << "\n    limits (-160.0 20.0)\n";
    o << "  end\n";
  }
  o << ":hierarchy\n  begin\n"
    << "    root lhipjoint rhipjoint lowerback\n    lhipjoint lfemur\n    lfemur ltibia\n    ltibia lfoot\n"
    << "    lfoot ltoes\n    rhipjoint rfemur\n    rfemur rtibia\n    rtibia rfoot\n    rfoot rtoes\n"
    << "    lowerback upperback\n    upperback thorax\n    thorax lowerneck lclavicle rclavicle\n"
    << "    lowerneck upperneck\n    upperneck head\n    lclavicle lhumerus\n    lhumerus lradius\n"
    << "    lradius lwrist\n    lwrist lhand lthumb\n    lhand lfingers\n    rclavicle rhumerus\n"
    << "    rhumerus rradius\n    rradius rwrist\n    rwrist rhand rthumb\n    rhand rfingers\n  end\n";
  return o.str();
}

inline std::shared_ptr<const gaitrec::Skeleton> cmu_skeleton(double scale = 1.0) {
  return std::make_shared<const gaitrec::Skeleton>(gaitrec::parse_asf(cmu_asf(scale)));
}

// Per-subject walking style: amplitudes and offsets of the main joint swings.
struct GaitStyle {
  double hip_swing = 25, knee_bend = 35, arm_swing = 20, elbow_bend = 15;
  double hip_offset = 0, knee_offset = 10, trunk_lean = 4, arm_offset = 0;
};

inline GaitStyle subject_style(int subject) {
  std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned>(subject));
  std::uniform_real_distribution<double> u(-1, 1);
  GaitStyle s;
  s.hip_swing += 6 * u(rng);
  s.knee_bend += 8 * u(rng);
  s.arm_swing += 8 * u(rng);
  s.elbow_bend += 6 * u(rng);
  s.hip_offset += 4 * u(rng);
  s.knee_offset += 4 * u(rng);
  s.trunk_lean += 3 * u(rng);
  s.arm_offset += 5 * u(rng);
  return s;
}

// Continuous walking: `frames` frames, one gait cycle every `period` frames,
// starting at `phase` cycles, with Gaussian channel noise of `noise` degrees.
// The root walks forward along Z with a wobbling orientation.
inline gaitrec::MotionSequence walking_motion(const gaitrec::Skeleton& sk, const GaitStyle& st, std::size_t frames,
                                              double period, double phase = 0.0, double noise = 0.0,
                                              std::uint64_t seed = 1, const std::string& subject = "01") {
  gaitrec::MotionSequence m;
  m.layout = gaitrec::ChannelLayout::from(sk);
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(m.layout.width));
  m.subject_id = subject;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0, 1);
  auto col = [&](const char* joint, gaitrec::Channel c) -> Eigen::Index {
    const auto* g = m.layout.find(joint);
    for (std::size_t k = 0; k < g->dof.size(); ++k)
      if (g->dof[k] == c) return static_cast<Eigen::Index>(g->offset + k);
    return -1;
  };
  using gaitrec::Channel;
  const double two_pi = 2 * std::numbers::pi;
  for (std::size_t f = 0; f < frames; ++f) {
    const auto t = static_cast<Eigen::Index>(f);
    const double p = two_pi * (static_cast<double>(f) / period + phase);
    auto set = [&](const char* j, Channel c, double v) { m.values(t, col(j, c)) = v; };
    set("root", Channel::TX, 0.5 * std::sin(p));
    set("root", Channel::TY, 17 + 0.4 * std::sin(2 * p));
    set("root", Channel::TZ, 0.3 * static_cast<double>(f));
    set("root", Channel::RX, 2 * std::sin(2 * p));
    set("root", Channel::RY, 5 * std::sin(p));
    set("root", Channel::RZ, 1.5 * std::sin(p));
    set("lfemur", Channel::RX, st.hip_offset - st.hip_swing * std::sin(p));
    set("rfemur", Channel::RX, st.hip_offset + st.hip_swing * std::sin(p));
    set("lfemur", Channel::RZ, 3 * std::sin(p));
    set("rfemur", Channel::RZ, -3 * std::sin(p));
    set("ltibia", Channel::RX, st.knee_offset + st.knee_bend * std::max(0.0, std::sin(p + 0.8)));
    set("rtibia", Channel::RX, st.knee_offset + st.knee_bend * std::max(0.0, std::sin(p + 0.8 + std::numbers::pi)));
    set("lfoot", Channel::RX, -10 + 12 * std::sin(p + 1.5));
    set("rfoot", Channel::RX, -10 - 12 * std::sin(p + 1.5));
    set("lowerback", Channel::RX, st.trunk_lean + 2 * std::sin(2 * p));
    set("upperback", Channel::RY, 4 * std::sin(p));
    set("thorax", Channel::RY, 3 * std::sin(p));
    set("lhumerus", Channel::RX, st.arm_offset + st.arm_swing * std::sin(p));
    set("rhumerus", Channel::RX, st.arm_offset - st.arm_swing * std::sin(p));
    set("lradius", Channel::RX, st.elbow_bend + 8 * std::sin(p + 0.5));
    set("rradius", Channel::RX, st.elbow_bend - 8 * std::sin(p + 0.5));
    set("head", Channel::RY, 2 * std::sin(p));
    if (noise > 0)
      for (Eigen::Index c = 6; c < m.values.cols(); ++c) m.values(t, c) += noise * gauss(rng);
  }
  return m;
}

// One gait cycle of a subject as a root-normalized sample.
inline gaitrec::GaitSample gait_sample(const std::shared_ptr<const gaitrec::Skeleton>& sk, int subject,
                                       std::size_t frames, double noise, std::uint64_t seed) {
  auto m = walking_motion(*sk, subject_style(subject), frames, static_cast<double>(frames - 1), 0.0, noise, seed);
  return gaitrec::make_sample(gaitrec::normalize_root(m), sk, "s" + std::to_string(subject));
}

// `classes` subjects with `per_class` cycles each, cycle lengths jittered
// around `frames`.
inline std::vector<gaitrec::GaitSample> gait_dataset(const std::shared_ptr<const gaitrec::Skeleton>& sk,
                                                     int classes, int per_class, std::size_t frames, double noise,
                                                     std::uint64_t seed) {
  std::vector<gaitrec::GaitSample> out;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < classes; ++c)
    for (int k = 0; k < per_class; ++k) {
      const std::size_t len = frames - 3 + rng() % 7;
      out.push_back(gait_sample(sk, c, len, noise, rng()));
    }
  return out;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("gaitrec_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

// ---------------------------------------------------------------------------
// Oracles

// DTW by enumerating every monotone warping path from (0,0) to (n-1,m-1).
inline double brute_force_dtw(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::Index n = a.rows(), m = b.rows();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(Eigen::Index, Eigen::Index, double)> walk = [&](Eigen::Index i, Eigen::Index j, double acc) {
    acc += (a.row(i) - b.row(j)).norm();
    if (acc >= best) return;
    if (i == n - 1 && j == m - 1) {
      best = acc;
      return;
    }
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, acc);
    if (i + 1 < n) walk(i + 1, j, acc);
    if (j + 1 < m) walk(i, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

// Scatter matrices by explicit double loops over classes and samples.
struct NaiveScatter {
  Eigen::MatrixXd between, within;
};
inline NaiveScatter naive_scatter(const Eigen::MatrixXd& x, const std::vector<std::string>& labels) {
  const Eigen::Index d = x.rows(), n = x.cols();
  std::map<std::string, std::vector<Eigen::Index>> classes;
  for (Eigen::Index i = 0; i < n; ++i) classes[labels[static_cast<std::size_t>(i)]].push_back(i);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index r = 0; r < d; ++r) mu(r) += x(r, i) / static_cast<double>(n);
  NaiveScatter s{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
  for (const auto& [name, idx] : classes) {
    Eigen::VectorXd mc = Eigen::VectorXd::Zero(d);
    for (auto i : idx)
      for (Eigen::Index r = 0; r < d; ++r) mc(r) += x(r, i) / static_cast<double>(idx.size());
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index q = 0; q < d; ++q) s.between(r, q) += (mc(r) - mu(r)) * (mc(q) - mu(q));
    for (auto i : idx)
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index q = 0; q < d; ++q)
          s.within(r, q) += (x(r, i) - mc(r)) * (x(q, i) - mc(q)) / static_cast<double>(idx.size());
  }
  return s;
}

// DBI, DI, SC and FDR written out term by term from their definitions, for
// vector points with Euclidean distance and mean centroids.
struct SeparabilityOracle {
  double dbi, di, sc, fdr;
};
inline SeparabilityOracle separability_oracle(const std::vector<Eigen::VectorXd>& pts,
                                              const std::vector<int>& cls) {
  const std::size_t n = pts.size();
  int C = 0;
  for (int c : cls) C = std::max(C, c + 1);
  auto dist = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double s = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += (a(i) - b(i)) * (a(i) - b(i));
    return std::sqrt(s);
  };
  std::vector<Eigen::VectorXd> mu(static_cast<std::size_t>(C), Eigen::VectorXd::Zero(pts[0].size()));
  std::vector<double> cnt(static_cast<std::size_t>(C), 0);
  Eigen::VectorXd all = Eigen::VectorXd::Zero(pts[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    mu[static_cast<std::size_t>(cls[i])] += pts[i];
    cnt[static_cast<std::size_t>(cls[i])] += 1;
    all += pts[i] / static_cast<double>(n);
  }
  for (int c = 0; c < C; ++c) mu[static_cast<std::size_t>(c)] /= cnt[static_cast<std::size_t>(c)];
  std::vector<double> sigma(static_cast<std::size_t>(C), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(cls[i]);
    sigma[c] += dist(pts[i], mu[c]) / cnt[c];
  }
  SeparabilityOracle o{};
  for (int c = 0; c < C; ++c) {
    double worst = -1;
    for (int d = 0; d < C; ++d)
      if (d != c) {
        const auto uc = static_cast<std::size_t>(c), ud = static_cast<std::size_t>(d);
        worst = std::max(worst, (sigma[uc] + sigma[ud]) / dist(mu[uc], mu[ud]));
      }
    o.dbi += worst / C;
  }
  double min_between = std::numeric_limits<double>::infinity(), max_sigma = 0;
  for (int c = 0; c < C; ++c) {
    max_sigma = std::max(max_sigma, sigma[static_cast<std::size_t>(c)]);
    for (int d = c + 1; d < C; ++d)
      min_between = std::min(min_between, dist(mu[static_cast<std::size_t>(c)], mu[static_cast<std::size_t>(d)]));
  }
  o.di = min_between / max_sigma;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(static_cast<std::size_t>(C), 0);
    for (std::size_t j = 0; j < n; ++j) sum[static_cast<std::size_t>(cls[j])] += dist(pts[i], pts[j]);
    const auto own = static_cast<std::size_t>(cls[i]);
    const double a = sum[own] / cnt[own];
    double b = std::numeric_limits<double>::infinity();
    for (int d = 0; d < C; ++d)
      if (static_cast<std::size_t>(d) != own) b = std::min(b, sum[static_cast<std::size_t>(d)] / cnt[static_cast<std::size_t>(d)]);
    const double mx = std::max(a, b);
    o.sc += (mx > 0 ? (b - a) / mx : 0.0) / static_cast<double>(n);
  }
  double num = 0, den = 0;
  for (int c = 0; c < C; ++c) num += dist(mu[static_cast<std::size_t>(c)], all) / C;
  for (std::size_t i = 0; i < n; ++i) den += dist(pts[i], mu[static_cast<std::size_t>(cls[i])]) / static_cast<double>(n);
  o.fdr = num / den;
  return o;
}

// Piecewise-linear evaluation of samples given on 0..n-1 at fractional time s.
inline double piecewise_linear(const std::vector<double>& y, double s) {
  if (s <= 0) return y.front();
  if (s >= static_cast<double>(y.size() - 1)) return y.back();
  const auto i = static_cast<std::size_t>(std::floor(s));
  const double f = s - static_cast<double>(i);
  return y[i] * (1 - f) + y[i + 1] * f;
}

}  // namespace testsupport
