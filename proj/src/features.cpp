#include "gaitrec/features.hpp"

#include <cmath>

#include "gaitrec/dtw.hpp"
#include "gaitrec/error.hpp"
#include "gaitrec/signal_stats.hpp"

namespace gaitrec {

namespace {

using L = Landmark;

const std::vector<MethodDescriptor>& registry() {
  using R = Representation;
  using D = DistanceKind;
  using K = MethodKind;
  static const std::vector<MethodDescriptor> methods = {
      {"ahmed", "Ahmed", K::Geometric, R::JC, D::Euclidean, 24},
      {"ali", "Ali", K::Geometric, R::JC, D::Euclidean, 2},
      {"andersson", "Andersson", K::Geometric, R::JC, D::Euclidean, 68},
      {"ball", "Ball", K::Geometric, R::JC, D::Euclidean, 18},
      {"dikovski", "Dikovski", K::Geometric, R::JC, D::Euclidean, 71},
      {"gavrilova", "Gavrilova", K::Geometric, R::JC, D::DtwSignals, std::nullopt},
      {"jiang", "Jiang", K::Geometric, R::JC, D::DtwSignals, std::nullopt},
      {"krzeszowski", "Krzeszowski", K::Geometric, R::Both, D::DtwSignals, std::nullopt},
      {"kumar", "Kumar", K::Geometric, R::JC, D::CovarianceFrobenius, 13950},
      {"kwolek", "Kwolek", K::Geometric, R::Both, D::Euclidean, 660},
      {"preis", "Preis", K::Geometric, R::JC, D::Euclidean, 13},
      {"sedmidubsky", "Sedmidubsky", K::Geometric, R::JC, D::DtwSignals, std::nullopt},
      {"sinha", "Sinha", K::Geometric, R::JC, D::Euclidean, 45},
      {"mmc_br", "_MMC_BR", K::Learned, R::BR, D::Mahalanobis, std::nullopt},
      {"mmc_jc", "_MMC_JC", K::Learned, R::JC, D::Mahalanobis, std::nullopt},
      {"pcalda_br", "_PCALDA_BR", K::Learned, R::BR, D::Mahalanobis, std::nullopt},
      {"pcalda_jc", "_PCALDA_JC", K::Learned, R::JC, D::Mahalanobis, std::nullopt},
      {"random", "_Random", K::Random, R::None, D::None, 0},
      {"raw_br", "_Raw_BR", K::Raw, R::BR, D::Euclidean, std::nullopt},
      {"raw_jc", "_Raw_JC", K::Raw, R::JC, D::Euclidean, 13950},
  };
  return methods;
}

// Appends mean, std and skew (or a subset) of a signal.
struct Features {
  std::vector<double> v;

  void mean(std::span<const double> s) { v.push_back(stats::mean(s)); }
  void mean_std(std::span<const double> s) {
    v.push_back(stats::mean(s));
    v.push_back(stats::stddev(s));
  }
  void mean_std_skew(std::span<const double> s) {
    mean_std(s);
    v.push_back(stats::skewness(s));
  }
  void mean_std_max(std::span<const double> s) {
    mean_std(s);
    v.push_back(stats::max(s));
  }
  void five(std::span<const double> s) {
    mean_std(s);
    v.push_back(stats::min(s));
    v.push_back(stats::max(s));
    v.push_back(stats::mean_abs_diff(s));
  }
  void append(const std::vector<double>& other) { v.insert(v.end(), other.begin(), other.end()); }
};

const Eigen::Vector3d kUp = Eigen::Vector3d::UnitY();
const Eigen::Vector3d kForward = Eigen::Vector3d::UnitZ();

std::vector<double> ahmed(const Body& b) {
  Features f;
  const std::pair<L, L> pairs[] = {{L::LFoot, L::RFoot}, {L::LKnee, L::RKnee}, {L::LWrist, L::RWrist},
                                   {L::LShoulder, L::RShoulder}};
  for (auto [l, r] : pairs)
    f.mean_std_skew(b.signal([&](std::size_t t) { return std::abs(b.at(t, l).z() - b.at(t, r).z()); }));
  f.mean_std(b.signal([&](std::size_t t) { return b.at(t, L::Head).y(); }));
  const std::pair<L, L> vertical[] = {{L::LWrist, L::RWrist}, {L::LShoulder, L::RShoulder},
                                      {L::LKnee, L::RKnee}, {L::LFoot, L::RFoot}};
  for (auto [l, r] : vertical)
    f.mean_std(b.signal([&](std::size_t t) { return 0.5 * (b.at(t, l).y() + b.at(t, r).y()); }));
  f.mean_std(b.signal(
      [&](std::size_t t) { return triangle_area(b.at(t, L::Root), b.at(t, L::LFoot), b.at(t, L::RFoot)); }));
  return f.v;
}

std::vector<double> ali(const Body& b) {
  Features f;
  f.mean(b.signal(
      [&](std::size_t t) { return triangle_area(b.at(t, L::LHip), b.at(t, L::LKnee), b.at(t, L::LAnkle)); }));
  f.mean(b.signal(
      [&](std::size_t t) { return triangle_area(b.at(t, L::RHip), b.at(t, L::RKnee), b.at(t, L::RAnkle)); }));
  return f.v;
}

double hip_angle(const Body& b, std::size_t t, bool left) {
  return left ? interior_angle_deg(b.at(t, L::Root), b.at(t, L::LHip), b.at(t, L::LKnee))
              : interior_angle_deg(b.at(t, L::Root), b.at(t, L::RHip), b.at(t, L::RKnee));
}

double knee_angle(const Body& b, std::size_t t, bool left) {
  return left ? interior_angle_deg(b.at(t, L::LHip), b.at(t, L::LKnee), b.at(t, L::LAnkle))
              : interior_angle_deg(b.at(t, L::RHip), b.at(t, L::RKnee), b.at(t, L::RAnkle));
}

double velocity(const Body& b) {
  const double time = b.cycle_time();
  return time > 0 ? b.stride_length() / time : 0.0;
}

std::vector<double> andersson(const Body& b) {
  Features f;
  // Extremes pooled over the hip and knee angle signals of both legs.
  std::vector<double> extremes;
  for (bool left : {true, false}) {
    for (int which = 0; which < 2; ++which) {
      auto sig = b.signal([&](std::size_t t) { return which == 0 ? hip_angle(b, t, left) : knee_angle(b, t, left); });
      auto ex = stats::local_extremes(sig);
      if (ex.empty()) {
        auto sm = stats::smooth3(sig);
        ex = {stats::min(sm), stats::max(sm)};
      }
      extremes.insert(extremes.end(), ex.begin(), ex.end());
    }
  }
  f.mean_std(extremes);
  f.v.push_back(b.step_length_leading(true));
  f.v.push_back(b.step_length_leading(false));
  f.v.push_back(b.stride_length());
  f.v.push_back(b.cycle_time());
  f.v.push_back(velocity(b));
  f.mean(b.height_signal());
  for (std::size_t j = 1; j < b.skeleton().joint_count(); ++j)
    f.mean_std(b.signal([&](std::size_t t) { return b.bone_length(t, j); }));
  return f.v;
}

std::vector<double> ball(const Body& b) {
  Features f;
  const std::array<L, 4> legs[] = {{L::LHip, L::LKnee, L::LAnkle, L::LFoot},
                                   {L::RHip, L::RKnee, L::RAnkle, L::RFoot}};
  for (const auto& [hip, knee, ankle, foot] : legs) {
    f.mean_std_max(b.signal([&](std::size_t t) { return angle_between_deg(b.at(t, hip) - b.at(t, knee), kUp); }));
    f.mean_std_max(b.signal(
        [&](std::size_t t) { return interior_angle_deg(b.at(t, hip), b.at(t, knee), b.at(t, ankle)); }));
    f.mean_std_max(
        b.signal([&](std::size_t t) { return angle_between_deg(b.at(t, foot) - b.at(t, ankle), kForward); }));
  }
  return f.v;
}

std::vector<double> dikovski(const Body& b) {
  Features f;
  f.v.push_back(b.step_length());
  f.mean(b.height_signal());
  const auto& sk = b.skeleton();
  for (std::size_t j = 1; j < sk.joint_count(); ++j) {
    if (j == b.index(L::LHip) || j == b.index(L::RHip)) continue;  // pelvis offsets, not limbs
    f.mean(b.signal([&](std::size_t t) { return b.bone_length(t, j); }));
  }
  const std::array<L, 3> angles[] = {
      {L::LShoulder, L::LElbow, L::LWrist}, {L::RShoulder, L::RElbow, L::RWrist},
      {L::Neck, L::LShoulder, L::LElbow},   {L::Neck, L::RShoulder, L::RElbow},
      {L::Root, L::LHip, L::LKnee},         {L::Root, L::RHip, L::RKnee},
      {L::LHip, L::LKnee, L::LAnkle},       {L::RHip, L::RKnee, L::RAnkle},
  };
  for (const auto& [a, m, c] : angles)
    f.five(b.signal([&](std::size_t t) { return interior_angle_deg(b.at(t, a), b.at(t, m), b.at(t, c)); }));
  f.mean(b.signal([&](std::size_t t) {
    return angle_between_deg(b.at(t, L::RShoulder) - b.at(t, L::LShoulder), b.at(t, L::RHip) - b.at(t, L::LHip));
  }));
  return f.v;
}

std::vector<double> preis(const Body& b) {
  Features f;
  auto seg = [&](L a, L c) { return stats::mean(b.signal([&](std::size_t t) { return b.distance(t, a, c); })); };
  const double lthigh = seg(L::LHip, L::LKnee), rthigh = seg(L::RHip, L::RKnee);
  const double lshank = seg(L::LKnee, L::LAnkle), rshank = seg(L::RKnee, L::RAnkle);
  f.mean(b.height_signal());
  f.v.push_back(0.5 * ((lthigh + lshank) + (rthigh + rshank)));
  f.mean(b.signal([&](std::size_t t) { return b.chain_length(t, L::Thorax); }));
  f.v.insert(f.v.end(), {lshank, rshank, lthigh, rthigh});
  f.v.push_back(seg(L::LShoulder, L::LElbow));
  f.v.push_back(seg(L::RShoulder, L::RElbow));
  f.v.push_back(seg(L::LElbow, L::LWrist));
  f.v.push_back(seg(L::RElbow, L::RWrist));
  f.v.push_back(b.step_length());
  f.v.push_back(velocity(b));
  return f.v;
}

std::vector<double> sinha(const Body& b) {
  Features f;
  f.append(ball(b));
  f.append(preis(b));
  auto poly = [&](std::size_t t, std::initializer_list<L> ls) {
    std::vector<Eigen::Vector3d> v;
    for (L l : ls) v.push_back(b.at(t, l));
    return v;
  };
  auto upper = [&](std::size_t t) { return poly(t, {L::LShoulder, L::RShoulder, L::RHip, L::LHip}); };
  f.mean(b.signal([&](std::size_t t) { return polygon_area(upper(t)); }));
  f.mean(b.signal([&](std::size_t t) {
    return polygon_area(poly(t, {L::LHip, L::RHip, L::RKnee, L::RAnkle, L::LAnkle, L::LKnee}));
  }));
  const std::initializer_list<L> limbs[] = {{L::LShoulder, L::LElbow, L::LWrist, L::LHand},
                                            {L::RShoulder, L::RElbow, L::RWrist, L::RHand},
                                            {L::LHip, L::LKnee, L::LAnkle, L::LFoot},
                                            {L::RHip, L::RKnee, L::RAnkle, L::RFoot}};
  for (const auto& limb : limbs)
    f.mean_std_max(b.signal([&](std::size_t t) { return (centroid(upper(t)) - centroid(poly(t, limb))).norm(); }));
  return f.v;
}

Template gavrilova(const Body& b, const SignalSelection& sel) {
  std::vector<std::vector<double>> signals;
  for (auto [x, y] : sel.distances) signals.push_back(b.signal([&](std::size_t t) { return b.distance(t, x, y); }));
  for (const auto& [x, m, y] : sel.angles)
    signals.push_back(b.signal([&](std::size_t t) { return interior_angle_deg(b.at(t, x), b.at(t, m), b.at(t, y)); }));
  return make_bundle_template("gavrilova", signals);
}

Template jiang(const Body& b) {
  std::vector<std::vector<double>> signals;
  const std::pair<L, L> bones[] = {{L::LHip, L::LKnee}, {L::RHip, L::RKnee}, {L::LKnee, L::LAnkle}, {L::RKnee, L::RAnkle}};
  for (auto [top, bottom] : bones)
    signals.push_back(b.signal([&](std::size_t t) { return angle_between_deg(b.at(t, top) - b.at(t, bottom), kUp); }));
  return make_bundle_template("jiang", signals);
}

// Rotation channel signal of `bone` about `axis`, or zeros if the bone has no
// such degree of freedom.
std::vector<double> rotation_signal(const GaitSample& s, std::string_view bone, Channel axis) {
  std::vector<double> out(static_cast<std::size_t>(s.rotations.rows()), 0.0);
  const ChannelGroup* g = s.layout.find(bone);
  if (!g) fail(ErrorCode::RepresentationMismatch, "sample lacks rotation channels for '" + std::string(bone) + "'");
  for (std::size_t k = 0; k < g->dof.size(); ++k) {
    if (g->dof[k] != axis) continue;
    for (std::size_t t = 0; t < out.size(); ++t)
      out[t] = s.rotations(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(g->offset + k));
  }
  return out;
}

void require_rotations(const GaitSample& s) {
  if (!s.has_rotations()) fail(ErrorCode::RepresentationMismatch, "sample has no bone rotations");
  if (s.has_joints() && s.rotations.rows() != s.joints.rows())
    fail(ErrorCode::RepresentationMismatch, "bone rotations and joint coordinates differ in length");
}

Template krzeszowski(const GaitSample& s, const Body& b) {
  require_rotations(s);
  std::vector<std::vector<double>> signals;
  for (const char* bone : {"lhumerus", "rhumerus", "lradius", "rradius", "lfemur", "rfemur", "ltibia", "rtibia"})
    for (Channel axis : {Channel::RX, Channel::RY, Channel::RZ}) signals.push_back(rotation_signal(s, bone, axis));
  signals.push_back(b.height_signal());
  signals.push_back(b.step_signal());
  return make_bundle_template("krzeszowski", signals);
}

Template kwolek(const GaitSample& raw, const FeatureOptions& opt) {
  require_rotations(raw);
  const GaitSample s = resample_linear(raw, opt.kwolek_frames);
  const Body b(s);
  std::vector<std::vector<double>> signals;
  for (const char* bone : {"lfemur", "rfemur", "ltibia", "rtibia", "lfoot", "rfoot", "lhumerus", "rhumerus",
                           "lradius", "rradius"}) {
    const ChannelGroup* g = s.layout.find(bone);
    if (!g) fail(ErrorCode::RepresentationMismatch, std::string("sample lacks rotation channels for '") + bone + "'");
    for (Channel axis : g->dof) signals.push_back(rotation_signal(s, bone, axis));
  }
  signals.push_back(b.height_signal());
  signals.push_back(b.step_signal());
  return make_bundle_template("kwolek", signals);
}

Template kumar(const GaitSample& raw, const FeatureOptions& opt) {
  const GaitSample s = resample_linear(raw, opt.kumar_frames);
  std::vector<std::vector<double>> signals(static_cast<std::size_t>(s.joints.cols()));
  for (std::size_t c = 0; c < signals.size(); ++c) {
    auto col = s.joints.col(static_cast<Eigen::Index>(c));
    signals[c].assign(col.data(), col.data() + col.size());
  }
  return make_bundle_template("kumar", signals);
}

Template sedmidubsky(const Body& b) {
  std::vector<std::vector<double>> signals;
  signals.push_back(b.signal([&](std::size_t t) { return b.distance(t, L::LShoulder, L::LHand); }));
  signals.push_back(b.signal([&](std::size_t t) { return b.distance(t, L::RShoulder, L::RHand); }));
  return make_bundle_template("sedmidubsky", signals);
}

void check_finite(const Template& t) {
  if (!t.values.allFinite())
    fail(ErrorCode::DegenerateSample, "method '" + t.method_id + "' produced non-finite features");
}

}  // namespace

std::span<const MethodDescriptor> method_registry() { return registry(); }

const MethodDescriptor& find_method(std::string_view id) {
  for (const auto& m : registry())
    if (m.id == id) return m;
  fail(ErrorCode::UnknownMethod, "unknown method '" + std::string(id) + "'");
}

const SignalSelection& SignalSelection::gavrilova_default() {
  static const SignalSelection sel{
      {
          {L::LHand, L::RHand},       {L::LElbow, L::RElbow},   {L::LShoulder, L::RShoulder},
          {L::LKnee, L::RKnee},       {L::LAnkle, L::RAnkle},   {L::LFoot, L::RFoot},
          {L::LHand, L::LHip},        {L::RHand, L::RHip},      {L::LHand, L::Head},
          {L::RHand, L::Head},        {L::LFoot, L::Head},      {L::RFoot, L::Head},
          {L::LHand, L::LFoot},       {L::RHand, L::RFoot},     {L::LHand, L::RFoot},
          {L::RHand, L::LFoot},       {L::LKnee, L::Root},      {L::RKnee, L::Root},
          {L::LElbow, L::LKnee},      {L::RElbow, L::RKnee},
      },
      {
          {L::LShoulder, L::LElbow, L::LWrist}, {L::RShoulder, L::RElbow, L::RWrist},
          {L::Neck, L::LShoulder, L::LElbow},   {L::Neck, L::RShoulder, L::RElbow},
          {L::LHip, L::LKnee, L::LAnkle},       {L::RHip, L::RKnee, L::RAnkle},
          {L::Root, L::LHip, L::LKnee},         {L::Root, L::RHip, L::RKnee},
          {L::LKnee, L::LAnkle, L::LFoot},      {L::RKnee, L::RAnkle, L::RFoot},
          {L::LElbow, L::LWrist, L::LHand},     {L::RElbow, L::RWrist, L::RHand},
          {L::Root, L::Spine, L::Neck},         {L::Spine, L::Neck, L::Head},
          {L::LKnee, L::Root, L::RKnee},        {L::LElbow, L::Neck, L::RElbow},
      }};
  return sel;
}

std::vector<std::string> SignalSelection::describe() const {
  std::vector<std::string> out;
  for (auto [a, b] : distances) out.push_back(std::string("dist:") + landmark_bone(a) + "-" + landmark_bone(b));
  for (const auto& [a, m, c] : angles)
    out.push_back(std::string("angle:") + landmark_bone(a) + "-" + landmark_bone(m) + "-" + landmark_bone(c));
  return out;
}

Template extract_geometric_features(std::string_view method_id, const GaitSample& sample,
                                    const FeatureOptions& options) {
  const MethodDescriptor& desc = find_method(method_id);
  if (desc.kind != MethodKind::Geometric)
    fail(ErrorCode::UnknownMethod, "'" + desc.id + "' is not a geometric extractor");
  if (sample.frame_count() < 2) fail(ErrorCode::DegenerateSample, "gait sample needs at least two frames");

  const Body body(sample);
  Template t;
  const std::string& id = desc.id;
  if (id == "ahmed") t = make_vector_template(id, ahmed(body));
  else if (id == "ali") t = make_vector_template(id, ali(body));
  else if (id == "andersson") t = make_vector_template(id, andersson(body));
  else if (id == "ball") t = make_vector_template(id, ball(body));
  else if (id == "dikovski") t = make_vector_template(id, dikovski(body));
  else if (id == "preis") t = make_vector_template(id, preis(body));
  else if (id == "sinha") t = make_vector_template(id, sinha(body));
  else if (id == "gavrilova") t = gavrilova(body, options.gavrilova);
  else if (id == "jiang") t = jiang(body);
  else if (id == "krzeszowski") t = krzeszowski(sample, body);
  else if (id == "kumar") t = kumar(sample, options);
  else if (id == "kwolek") t = kwolek(sample, options);
  else if (id == "sedmidubsky") t = sedmidubsky(body);
  else fail(ErrorCode::UnknownMethod, "no extractor for '" + id + "'");
  t.label = sample.label;
  check_finite(t);
  return t;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd mt = m.transpose();
  return Eigen::Map<const Eigen::VectorXd>(mt.data(), mt.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& values, std::size_t frames) {
  if (frames == 0 || values.size() % static_cast<Eigen::Index>(frames) != 0)
    fail(ErrorCode::LayoutMismatch, "unflatten: value count is not a multiple of the frame count");
  const Eigen::Index width = values.size() / static_cast<Eigen::Index>(frames);
  return Eigen::Map<const Eigen::MatrixXd>(values.data(), width, static_cast<Eigen::Index>(frames)).transpose();
}

Template raw_template(const GaitSample& sample, Representation representation, std::size_t frames) {
  Template t;
  t.label = sample.label;
  if (representation == Representation::BR) {
    if (!sample.has_rotations()) fail(ErrorCode::RepresentationMismatch, "sample has no bone rotations");
    t.method_id = "raw_br";
    t.values = flatten(resample_rows(sample.rotations, frames));
  } else if (representation == Representation::JC) {
    if (!sample.has_joints()) fail(ErrorCode::RepresentationMismatch, "sample has no joint coordinates");
    t.method_id = "raw_jc";
    t.values = flatten(resample_rows(sample.joints, frames));
  } else {
    fail(ErrorCode::InvalidArgument, "raw_template needs the BR or JC representation");
  }
  return t;
}

Eigen::MatrixXd bundle_covariance(const Template& t) {
  if (!t.is_bundle() || t.signal_length() == 0) fail(ErrorCode::LayoutMismatch, "covariance needs a signal bundle");
  const auto T = static_cast<Eigen::Index>(t.signal_length());
  const auto k = static_cast<Eigen::Index>(t.signals);
  Eigen::Map<const Eigen::MatrixXd> x(t.values.data(), T, k);
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(T);
}

double template_distance(const MethodDescriptor& method, const Template& a, const Template& b) {
  if (a.method_id != b.method_id || a.signals != b.signals)
    fail(ErrorCode::LayoutMismatch, "templates come from different methods or layouts");
  switch (method.distance) {
    case DistanceKind::Euclidean:
      if (a.values.size() != b.values.size())
        fail(ErrorCode::LayoutMismatch, "templates differ in dimensionality");
      return (a.values - b.values).norm();
    case DistanceKind::DtwSignals: {
      if (!a.is_bundle()) fail(ErrorCode::LayoutMismatch, "DTW distance needs signal bundles");
      double sum = 0;
      for (std::size_t i = 0; i < a.signals; ++i) sum += dtw_distance(a.signal(i), b.signal(i));
      return sum;
    }
    case DistanceKind::CovarianceFrobenius:
      return (bundle_covariance(a) - bundle_covariance(b)).norm();
    case DistanceKind::Mahalanobis:
    case DistanceKind::None:
      break;
  }
  fail(ErrorCode::InvalidArgument, "method '" + method.id + "' has no template-level distance");
}

}  // namespace gaitrec
