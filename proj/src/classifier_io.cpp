#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "gaitrec/classifier.hpp"
#include "gaitrec/error.hpp"
#include "gaitrec/parallel.hpp"
#include "gaitrec/rng.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

Classifier learn_classifier(std::string_view method_id, std::span<const GaitSample> samples,
                            std::shared_ptr<const Skeleton> skeleton, const MethodOptions& options) {
  Classifier c{MethodModel::fit(method_id, samples, options), std::move(skeleton), {}};
  c.gallery.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) { c.gallery[i] = c.model.extract(samples[i]); });
  return c;
}

std::vector<RankedIdentity> rank_identities(const Classifier& c, const Template& probe, std::uint64_t seed) {
  if (c.gallery.empty()) fail(ErrorCode::EmptyGallery, "the gallery is empty");
  std::vector<RankedIdentity> ranked;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& g : c.gallery) {
    auto [it, fresh] = slot.try_emplace(g.label, ranked.size());
    if (fresh) ranked.push_back({g.label, std::numeric_limits<double>::infinity()});
  }
  if (c.model.is_random()) {
    Rng rng(seed);
    shuffle(ranked, rng);
    for (auto& r : ranked) r.distance = std::numeric_limits<double>::quiet_NaN();
    return ranked;
  }
  for (const auto& g : c.gallery) {
    double& best = ranked[slot.at(g.label)].distance;
    best = std::min(best, c.model.distance(probe, g));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.distance < b.distance; });
  return ranked;
}

namespace {

void write_matrix(std::ostringstream& os, std::string_view name, const Eigen::MatrixXd& m) {
  os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << text::shortest(m(r, c));
    os << "\n";
  }
}

// Line cursor over the container text.
class Reader {
 public:
  explicit Reader(std::string_view text) : lines_(text::split(text, '\n')) {}

  bool done() const { return pos_ >= lines_.size(); }
  std::string_view next() {
    if (done()) malformed("unexpected end of file");
    return text::trim(lines_[pos_++]);
  }
  std::vector<std::string_view> fields(std::string_view keyword, std::size_t count) {
    auto f = text::split_ws(next());
    if (f.empty() || f[0] != keyword || f.size() != count + 1)
      malformed("expected '" + std::string(keyword) + "' with " + std::to_string(count) + " fields");
    return f;
  }
  std::size_t count(std::string_view tok) {
    auto v = text::parse_int(tok);
    if (!v || *v < 0) malformed("bad count '" + std::string(tok) + "'");
    return static_cast<std::size_t>(*v);
  }
  Eigen::MatrixXd matrix(std::string_view name) {
    auto f = fields("matrix", 3);
    if (f[1] != name) malformed("expected matrix '" + std::string(name) + "'");
    const auto rows = static_cast<Eigen::Index>(count(f[2]));
    const auto cols = static_cast<Eigen::Index>(count(f[3]));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      auto vals = text::split_ws(next());
      if (static_cast<Eigen::Index>(vals.size()) != cols) malformed("matrix row has the wrong length");
      for (Eigen::Index c = 0; c < cols; ++c) {
        auto v = text::parse_double(vals[static_cast<std::size_t>(c)]);
        if (!v) malformed("non-numeric matrix entry");
        m(r, c) = *v;
      }
    }
    return m;
  }
  std::string block(std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (done()) malformed("truncated block");
      out.append(lines_[pos_++]);
      out.push_back('\n');
    }
    return out;
  }
  [[noreturn]] void malformed(const std::string& msg) const {
    fail(ErrorCode::MalformedFile, "classifier line " + std::to_string(pos_) + ": " + msg);
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

std::size_t line_count(std::string_view s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

std::string write_classifier(const Classifier& c) {
  std::ostringstream os;
  os << kClassifierTag << ' ' << kClassifierVersion << "\n";
  os << "method " << c.model.id() << "\n";
  os << "target_frames " << c.model.target_frames() << "\n";
  const auto& learned = c.model.learned();
  os << "learned " << (learned ? 1 : 0) << "\n";
  if (learned) {
    os << "source " << (learned->transform.source == TransformSource::MMC ? "mmc" : "pcalda") << "\n";
    write_matrix(os, "phi", learned->transform.phi);
    write_matrix(os, "eigenvalues", learned->transform.eigenvalues.transpose());
    write_matrix(os, "covariance_pinv", learned->covariance_pinv);
  }
  std::string asf = c.skeleton ? write_asf(*c.skeleton) : std::string();
  if (!asf.empty() && asf.back() != '\n') asf.push_back('\n');
  os << "skeleton " << line_count(asf) << "\n" << asf;
  const std::string gallery = write_templates_csv(c.gallery);
  os << "gallery " << c.gallery.size() << "\n" << gallery;
  os << "end\n";
  return os.str();
}

Classifier parse_classifier(std::string_view text) {
  Reader in(text);
  auto header = text::split_ws(in.next());
  if (header.size() != 2 || header[0] != kClassifierTag) in.malformed("not a classifier file");
  if (header[1] != std::to_string(kClassifierVersion))
    in.malformed("unsupported classifier version '" + std::string(header[1]) + "'");
  const std::string method(in.fields("method", 1)[1]);
  const std::size_t target = in.count(in.fields("target_frames", 1)[1]);
  const std::size_t has_learned = in.count(in.fields("learned", 1)[1]);
  std::optional<MahalanobisModel> learned;
  if (has_learned) {
    auto source = in.fields("source", 1)[1];
    MahalanobisModel m;
    if (source == "mmc") m.transform.source = TransformSource::MMC;
    else if (source == "pcalda") m.transform.source = TransformSource::PCALDA;
    else in.malformed("unknown transform source");
    m.transform.phi = in.matrix("phi");
    const Eigen::MatrixXd ev = in.matrix("eigenvalues");
    m.transform.eigenvalues = ev.size() ? Eigen::VectorXd(ev.row(0).transpose()) : Eigen::VectorXd();
    m.covariance_pinv = in.matrix("covariance_pinv");
    if (m.covariance_pinv.rows() != m.transform.phi.cols() || m.covariance_pinv.cols() != m.transform.phi.cols())
      in.malformed("covariance does not match the transform");
    learned = std::move(m);
  }
  const std::size_t asf_lines = in.count(in.fields("skeleton", 1)[1]);
  std::shared_ptr<const Skeleton> skeleton;
  if (asf_lines) {
    try {
      skeleton = std::make_shared<const Skeleton>(parse_asf(in.block(asf_lines)));
    } catch (const Error& e) {
      in.malformed(std::string("embedded skeleton: ") + e.what());
    }
  }
  const std::size_t n = in.count(in.fields("gallery", 1)[1]);
  std::vector<Template> gallery;
  try {
    gallery = parse_templates_csv(in.block(n));
  } catch (const Error& e) {
    in.malformed(std::string("gallery: ") + e.what());
  }
  if (gallery.size() != n) in.malformed("gallery count mismatch");
  if (in.next() != "end") in.malformed("missing 'end'");
  for (const auto& t : gallery)
    if (t.method_id != method) in.malformed("gallery template of method '" + t.method_id + "'");
  MethodModel model = MethodModel::restore(method, target, std::move(learned));
  return Classifier{std::move(model), std::move(skeleton), std::move(gallery)};
}

void save_classifier(const Classifier& c, const std::string& path) { text::write_file(path, write_classifier(c)); }

Classifier load_classifier(const std::string& path) {
  const std::string body = text::read_file(path);
  try {
    return parse_classifier(body);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedFile || e.code() == ErrorCode::UnknownMethod)
      fail(e.code(), path + ": " + e.what());
    throw;
  }
}

}  // namespace gaitrec
