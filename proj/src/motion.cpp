#include "gaitrec/motion.hpp"

#include <filesystem>
#include <sstream>

#include "gaitrec/error.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

ChannelLayout ChannelLayout::from(const Skeleton& skeleton) {
  ChannelLayout layout;
  for (std::size_t i = 0; i < skeleton.joints.size(); ++i) {
    const auto& j = skeleton.joints[i];
    if (j.dof.empty()) continue;
    layout.groups.push_back({j.name, i, j.dof, layout.width});
    layout.width += j.dof.size();
  }
  return layout;
}

const ChannelGroup* ChannelLayout::find(std::string_view joint) const noexcept {
  for (const auto& g : groups)
    if (g.joint == joint) return &g;
  return nullptr;
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& msg) {
  fail(ErrorCode::MalformedAmc, "AMC line " + std::to_string(line) + ": " + msg);
}

}  // namespace

MotionSequence parse_amc(std::string_view text_in, const Skeleton& skeleton) {
  MotionSequence m;
  m.layout = ChannelLayout::from(skeleton);
  const auto& groups = m.layout.groups;

  std::vector<std::vector<double>> frames;
  std::vector<char> seen;
  long long expected_frame = 1;

  auto close_frame = [&](std::size_t ln) {
    if (frames.empty()) return;
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (!seen[g])
        malformed(ln, "frame " + std::to_string(frames.size()) + " lacks bone '" + groups[g].joint + "'");
  };

  std::size_t ln = 0;
  for (auto raw : text::split(text_in, '\n')) {
    ++ln;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == ':') {
      auto key = text::lower(line);
      if (key == ":radians") m.degrees = false;
      if (key == ":degrees") m.degrees = true;
      continue;
    }
    auto toks = text::split_ws(line);
    if (toks.size() == 1 && text::parse_int(toks[0])) {
      close_frame(ln);
      long long n = *text::parse_int(toks[0]);
      if (n != expected_frame)
        malformed(ln, "expected frame " + std::to_string(expected_frame) + ", found " + std::to_string(n));
      ++expected_frame;
      frames.emplace_back(m.layout.width, 0.0);
      seen.assign(groups.size(), 0);
      continue;
    }
    if (frames.empty()) malformed(ln, "bone data before first frame number");
    const ChannelGroup* g = m.layout.find(toks[0]);
    if (!g) {
      if (skeleton.find(toks[0]) >= 0)
        malformed(ln, "bone '" + std::string(toks[0]) + "' has no degrees of freedom");
      malformed(ln, "unknown bone '" + std::string(toks[0]) + "'");
    }
    std::size_t gi = static_cast<std::size_t>(g - groups.data());
    if (seen[gi]) malformed(ln, "bone '" + g->joint + "' repeated within a frame");
    seen[gi] = 1;
    if (toks.size() - 1 != g->dof.size())
      malformed(ln, "bone '" + g->joint + "' expects " + std::to_string(g->dof.size()) + " values, found " +
                        std::to_string(toks.size() - 1));
    for (std::size_t k = 0; k < g->dof.size(); ++k) {
      auto v = text::parse_double(toks[k + 1]);
      if (!v) malformed(ln, "non-numeric value '" + std::string(toks[k + 1]) + "'");
      frames.back()[g->offset + k] = *v;
    }
  }
  close_frame(ln);

  m.values.resize(static_cast<Eigen::Index>(frames.size()), static_cast<Eigen::Index>(m.layout.width));
  for (std::size_t f = 0; f < frames.size(); ++f)
    for (std::size_t c = 0; c < m.layout.width; ++c)
      m.values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(c)) = frames[f][c];
  return m;
}

MotionSequence load_amc(const std::string& path, const Skeleton& skeleton) {
  MotionSequence m;
  try {
    m = parse_amc(text::read_file(path), skeleton);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
  auto name = std::filesystem::path(path).filename().string();
  m.source_file = name;
  m.subject_id = subject_from_filename(name);
  return m;
}

std::string write_amc(const MotionSequence& m) {
  std::ostringstream os;
  os << ":FULLY-SPECIFIED\n";
  os << (m.degrees ? ":DEGREES\n" : ":RADIANS\n");
  for (Eigen::Index f = 0; f < m.values.rows(); ++f) {
    os << (f + 1) << "\n";
    for (const auto& g : m.layout.groups) {
      os << g.joint;
      for (std::size_t k = 0; k < g.dof.size(); ++k)
        os << ' ' << text::fixed_trimmed(m.values(f, static_cast<Eigen::Index>(g.offset + k)), 6);
      os << "\n";
    }
  }
  return os.str();
}

MotionSequence normalize_root(const MotionSequence& motion) {
  MotionSequence out = motion;
  for (const auto& g : out.layout.groups) {
    if (g.joint_index != 0) continue;
    out.values.middleCols(static_cast<Eigen::Index>(g.offset), static_cast<Eigen::Index>(g.dof.size())).setZero();
  }
  return out;
}

MotionSequence slice_frames(const MotionSequence& motion, std::size_t first, std::size_t count) {
  if (first + count > motion.frame_count())
    fail(ErrorCode::InvalidArgument, "slice_frames: window exceeds motion length");
  MotionSequence out = motion;
  out.values = motion.values.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count));
  return out;
}

std::string subject_from_filename(std::string_view filename) {
  auto base = std::filesystem::path(std::string(filename)).stem().string();
  auto pos = base.find('_');
  return pos == std::string::npos ? base : base.substr(0, pos);
}

bool approx_equal(const MotionSequence& a, const MotionSequence& b, double tol) {
  if (!(a.layout == b.layout) || a.degrees != b.degrees) return false;
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) return false;
  if (a.values.size() == 0) return true;
  return (a.values - b.values).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace gaitrec
