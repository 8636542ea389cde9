#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gaitrec/error.hpp"
#include "gaitrec/features.hpp"
#include "gaitrec/sample.hpp"
#include "gaitrec/signal_stats.hpp"
#include "gaitrec/template.hpp"
#include "support.hpp"

using namespace gaitrec;
using namespace testsupport;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

std::vector<std::string> geometric_ids() {
  std::vector<std::string> ids;
  for (const auto& m : method_registry())
    if (m.kind == MethodKind::Geometric) ids.push_back(m.id);
  return ids;
}

}  // namespace

TEST_CASE("registry: twenty methods with unique ids") {
  const auto reg = method_registry();
  CHECK(reg.size() == 20);
  std::set<std::string> ids;
  for (const auto& m : reg) ids.insert(m.id);
  CHECK(ids.size() == 20);
  CHECK(geometric_ids().size() == 13);
  CHECK(find_method("mmc_br").display_name == "_MMC_BR");
  CHECK(find_method("random").display_name == "_Random");
  CHECK(code_of([] { find_method("nope"); }) == ErrorCode::UnknownMethod);
}

TEST_CASE("fixed-length extractors produce the nominal dimensionality") {
  const auto sk = cmu_skeleton();
  const std::pair<const char*, std::size_t> expected[] = {{"ahmed", 24}, {"ali", 2},   {"andersson", 68},
                                                          {"ball", 18},  {"dikovski", 71}, {"preis", 13},
                                                          {"sinha", 45}};
  for (int subject = 0; subject < 3; ++subject) {
    const auto s = gait_sample(sk, subject, 40 + 7 * static_cast<std::size_t>(subject), 1.0, 9 + subject);
    for (auto [id, td] : expected) {
      CAPTURE(id);
      const auto t = extract_geometric_features(id, s);
      CHECK(t.dimensionality() == td);
      CHECK(find_method(id).nominal_td == td);
      CHECK(!t.is_bundle());
      CHECK(t.values.allFinite());
    }
  }
}

TEST_CASE("signal extractors produce bundles") {
  const auto sk = cmu_skeleton();
  const auto s = gait_sample(sk, 1, 45, 0.5, 3);
  const auto g = extract_geometric_features("gavrilova", s);
  CHECK(g.signals == 36);
  CHECK(g.signal_length() == 45);
  CHECK(SignalSelection::gavrilova_default().describe().size() == 36);
  CHECK(extract_geometric_features("jiang", s).signals == 4);
  CHECK(extract_geometric_features("sedmidubsky", s).signals == 2);
  // Eight bones times three axes, plus height and step length.
  CHECK(extract_geometric_features("krzeszowski", s).signals == 26);
  const auto k = extract_geometric_features("kumar", s);
  CHECK(k.dimensionality() == 13950);
  CHECK(k.signals == 93);
  CHECK(extract_geometric_features("kwolek", s).dimensionality() == 660);
}

TEST_CASE("extractors reject missing representations and degenerate samples") {
  const auto sk = cmu_skeleton();
  auto s = gait_sample(sk, 0, 30, 0.0, 1);
  auto no_joints = s;
  no_joints.joints.resize(0, 0);
  CHECK(code_of([&] { extract_geometric_features("ahmed", no_joints); }) == ErrorCode::RepresentationMismatch);
  auto no_rot = s;
  no_rot.rotations.resize(0, 0);
  CHECK(code_of([&] { extract_geometric_features("krzeszowski", no_rot); }) == ErrorCode::RepresentationMismatch);
  CHECK(code_of([&] { raw_template(no_rot, Representation::BR); }) == ErrorCode::RepresentationMismatch);
  auto one = s;
  one.joints = s.joints.topRows(1);
  one.rotations = s.rotations.topRows(1);
  CHECK(code_of([&] { extract_geometric_features("ball", one); }) == ErrorCode::DegenerateSample);
  CHECK(code_of([&] { extract_geometric_features("mmc_jc", s); }) == ErrorCode::UnknownMethod);
}

TEST_CASE("raw templates: 13,950 values for JC; constant pose repeats blocks; flatten round trip") {
  const auto sk = cmu_skeleton();
  const auto s = gait_sample(sk, 2, 57, 0.7, 5);
  const auto jc = raw_template(s, Representation::JC);
  CHECK(jc.dimensionality() == 3 * 31 * 150);
  CHECK(jc.dimensionality() == 13950);
  CHECK(jc.method_id == "raw_jc");
  const auto br = raw_template(s, Representation::BR);
  CHECK(br.dimensionality() == static_cast<std::size_t>(s.rotations.cols()) * 150);
  CHECK(br.method_id == "raw_br");

  auto still = s;
  for (Eigen::Index t = 1; t < still.joints.rows(); ++t) still.joints.row(t) = still.joints.row(0);
  const auto ct = raw_template(still, Representation::JC);
  const auto blocks = unflatten(ct.values, 150);
  for (Eigen::Index t = 0; t < 150; ++t) CHECK((blocks.row(t) - blocks.row(0)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd m = Eigen::MatrixXd::Random(7, 5);
  CHECK(unflatten(flatten(m), 7) == m);
  // Frame-major: the first five values are frame 0.
  CHECK(flatten(m).head(5) == m.row(0).transpose());
}

TEST_CASE("resample_linear: identity, midpoint, interpolation oracle") {
  const auto sk = cmu_skeleton();
  const auto s = gait_sample(sk, 0, 33, 2.0, 8);
  const auto same = resample_linear(s, 33);
  CHECK(same.joints == s.joints);
  CHECK(same.rotations == s.rotations);

  Eigen::MatrixXd two(2, 1);
  two << 0, 10;
  const auto three = resample_rows(two, 3);
  CHECK(three(0, 0) == 0);
  CHECK(three(1, 0) == doctest::Approx(5));
  CHECK(three(2, 0) == 10);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 40, target = 2 + rng() % 80;
    std::vector<double> y(n);
    for (auto& v : y) v = g(rng);
    Eigen::MatrixXd col = Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));
    const auto r = resample_rows(col, target);
    REQUIRE(static_cast<std::size_t>(r.rows()) == target);
    CHECK(r(0, 0) == y.front());
    CHECK(r(static_cast<Eigen::Index>(target - 1), 0) == y.back());
    for (std::size_t i = 0; i < target; ++i) {
      const double pos = static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(target - 1);
      CHECK(r(static_cast<Eigen::Index>(i), 0) == doctest::Approx(piecewise_linear(y, pos)).epsilon(1e-12));
    }
  }
  const auto up = resample_linear(s, 90);
  CHECK(up.frame_count() == 90);
  CHECK(up.duration() == doctest::Approx(s.duration()));
  CHECK(code_of([&] { resample_linear(s, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Ahmed features are unchanged by mirroring the sample across X") {
  const auto sk = cmu_skeleton();
  const auto s = gait_sample(sk, 4, 41, 1.0, 2);
  auto mirrored = s;
  for (Eigen::Index c = 0; c < mirrored.joints.cols(); c += 3) mirrored.joints.col(c) *= -1;
  const auto a = extract_geometric_features("ahmed", s);
  const auto b = extract_geometric_features("ahmed", mirrored);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("property: features ignore rigid translation of the recording") {
  const auto sk = cmu_skeleton();
  auto m = walking_motion(*sk, subject_style(6), 38, 37.0, 0.0, 0.8, 12, "03");
  auto moved = m;
  moved.values.col(0).array() += 31.5;
  moved.values.col(1).array() -= 4.0;
  moved.values.col(2).array() += 100.0;
  const auto a = make_sample(normalize_root(m), sk, "03");
  const auto b = make_sample(normalize_root(moved), sk, "03");
  for (const auto& id : geometric_ids()) {
    CAPTURE(id);
    CHECK((extract_geometric_features(id, a).values - extract_geometric_features(id, b).values).norm() == 0.0);
  }
}

TEST_CASE("template_distance: identity, symmetry, Euclidean 3-4-5, layout checks") {
  const auto sk = cmu_skeleton();
  const auto s1 = gait_sample(sk, 0, 28, 1.0, 1), s2 = gait_sample(sk, 1, 31, 1.0, 2);
  for (const auto& id : geometric_ids()) {
    CAPTURE(id);
    const auto& m = find_method(id);
    const auto a = extract_geometric_features(id, s1), b = extract_geometric_features(id, s2);
    CHECK(template_distance(m, a, a) == 0.0);
    const double ab = template_distance(m, a, b);
    CHECK(ab >= 0);
    CHECK(ab == doctest::Approx(template_distance(m, b, a)).epsilon(1e-12));
  }
  const auto e = make_vector_template("ali", {0, 0}), f = make_vector_template("ali", {3, 4});
  CHECK(template_distance(find_method("ali"), e, f) == 5.0);
  const auto other = make_vector_template("ball", {3, 4});
  CHECK(code_of([&] { template_distance(find_method("ali"), e, other); }) == ErrorCode::LayoutMismatch);
  const auto longer = make_vector_template("ali", {3, 4, 5});
  CHECK(code_of([&] { template_distance(find_method("ali"), e, longer); }) == ErrorCode::LayoutMismatch);
}

TEST_CASE("DTW bundle distance is the sum of per-signal brute-force DTW") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> sa(3, std::vector<double>(6)), sb(3, std::vector<double>(6));
    for (auto& s : sa)
      for (auto& v : s) v = g(rng);
    for (auto& s : sb)
      for (auto& v : s) v = g(rng);
    const auto a = make_bundle_template("jiang", sa), b = make_bundle_template("jiang", sb);
    double expect = 0;
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXd x = Eigen::Map<Eigen::VectorXd>(sa[static_cast<std::size_t>(k)].data(), 6);
      Eigen::MatrixXd y = Eigen::Map<Eigen::VectorXd>(sb[static_cast<std::size_t>(k)].data(), 6);
      expect += brute_force_dtw(x, y);
    }
    CHECK(template_distance(find_method("jiang"), a, b) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("Kumar distance is the Frobenius norm of the covariance difference") {
  const auto a = make_bundle_template("kumar", {{1, 2, 3, 4}, {0, 1, 0, 1}});
  const auto b = make_bundle_template("kumar", {{2, 2, 2, 2}, {1, 3, 5, 7}});
  auto cov = [](const std::vector<std::vector<double>>& s) {
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    const double n = static_cast<double>(s[0].size());
    double m[2] = {0, 0};
    for (int i = 0; i < 2; ++i)
      for (double v : s[static_cast<std::size_t>(i)]) m[i] += v / n;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (std::size_t t = 0; t < s[0].size(); ++t)
          c(i, j) += (s[static_cast<std::size_t>(i)][t] - m[i]) * (s[static_cast<std::size_t>(j)][t] - m[j]) / n;
    return c;
  };
  const double expect =
      (cov({{1, 2, 3, 4}, {0, 1, 0, 1}}) - cov({{2, 2, 2, 2}, {1, 3, 5, 7}})).norm();
  CHECK(template_distance(find_method("kumar"), a, b) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("statistics helpers on constant and known signals") {
  const std::vector<double> c(9, 2.5);
  CHECK(stats::mean(c) == 2.5);
  CHECK(stats::stddev(c) == 0.0);
  CHECK(stats::skewness(c) == 0.0);
  CHECK(stats::min(c) == 2.5);
  CHECK(stats::max(c) == 2.5);
  const std::vector<double> x{1, 2, 3, 10};
  CHECK(stats::mean(x) == 4.0);
  CHECK(stats::stddev(x) == doctest::Approx(std::sqrt(12.5)));
  // m3 / m2^1.5 with population moments.
  const double m2 = 12.5, m3 = (-27.0 - 8.0 - 1.0 + 216.0) / 4.0;
  CHECK(stats::skewness(x) == doctest::Approx(m3 / std::pow(m2, 1.5)));
  CHECK(stats::mean_abs_diff(x) == doctest::Approx(3.0));
  const auto ext = stats::local_extremes(std::vector<double>{0, 0, 3, 6, 3, 0, 0, -3, -6, -3, 0, 0});
  REQUIRE(ext.size() == 2);
  CHECK(ext[0] > 0);
  CHECK(ext[1] < 0);
}

TEST_CASE("template CSV round trip") {
  const auto sk = cmu_skeleton();
  const auto s = gait_sample(sk, 0, 20, 0.5, 4);
  std::vector<Template> ts{extract_geometric_features("preis", s), extract_geometric_features("jiang", s)};
  const auto back = parse_templates_csv(write_templates_csv(ts));
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].method_id == ts[i].method_id);
    CHECK(back[i].label == ts[i].label);
    CHECK(back[i].signals == ts[i].signals);
    CHECK(back[i].values == ts[i].values);
  }
  CHECK(code_of([] { parse_templates_csv("preis,s0,0,abc\n"); }) == ErrorCode::MalformedFile);
}
