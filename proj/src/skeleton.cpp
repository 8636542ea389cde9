#include "gaitrec/skeleton.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gaitrec/error.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedAsf: return "MalformedAsf";
    case ErrorCode::MalformedAmc: return "MalformedAmc";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::HeterogeneousTopology: return "HeterogeneousTopology";
    case ErrorCode::UnboundMotion: return "UnboundMotion";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::RepresentationMismatch: return "RepresentationMismatch";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::TooFewClasses: return "TooFewClasses";
    case ErrorCode::DegenerateScatter: return "DegenerateScatter";
    case ErrorCode::SingularWithinScatter: return "SingularWithinScatter";
    case ErrorCode::InsufficientClasses: return "InsufficientClasses";
    case ErrorCode::EmptyGallery: return "EmptyGallery";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
  }
  return "Unknown";
}

const char* channel_name(Channel c) noexcept {
  switch (c) {
    case Channel::TX: return "tx";
    case Channel::TY: return "ty";
    case Channel::TZ: return "tz";
    case Channel::RX: return "rx";
    case Channel::RY: return "ry";
    case Channel::RZ: return "rz";
  }
  return "?";
}

bool is_rotation(Channel c) noexcept {
  return c == Channel::RX || c == Channel::RY || c == Channel::RZ;
}

int Skeleton::find(std::string_view joint_name) const noexcept {
  for (std::size_t i = 0; i < joints.size(); ++i)
    if (joints[i].name == joint_name) return static_cast<int>(i);
  return -1;
}

namespace {

struct LineReader {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;

  explicit LineReader(std::string_view text) {
    for (auto line : text::split(text, '\n')) {
      auto t = text::trim(line);
      if (t.empty() || t.front() == '#') {
        lines.push_back({});
        continue;
      }
      lines.push_back(t);
    }
  }
  std::size_t line_no() const { return pos; }
};

[[noreturn]] void malformed(std::size_t line, const std::string& msg) {
  fail(ErrorCode::MalformedAsf, "ASF line " + std::to_string(line) + ": " + msg);
}

double number(std::string_view tok, std::size_t line) {
  auto v = text::parse_double(tok);
  if (!v) malformed(line, "non-numeric field '" + std::string(tok) + "'");
  return *v;
}

Eigen::Vector3d vec3(const std::vector<std::string_view>& toks, std::size_t first, std::size_t line) {
  if (toks.size() < first + 3) malformed(line, "expected three numbers");
  return {number(toks[first], line), number(toks[first + 1], line), number(toks[first + 2], line)};
}

Channel parse_channel(std::string_view tok, std::size_t line) {
  auto t = text::lower(tok);
  if (t == "tx") return Channel::TX;
  if (t == "ty") return Channel::TY;
  if (t == "tz") return Channel::TZ;
  if (t == "rx") return Channel::RX;
  if (t == "ry") return Channel::RY;
  if (t == "rz") return Channel::RZ;
  malformed(line, "unknown degree of freedom '" + std::string(tok) + "'");
}

std::string parse_order(std::string_view tok, std::size_t line) {
  std::string up;
  for (char c : tok) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up.size() != 3 || up.find('X') == std::string::npos || up.find('Y') == std::string::npos ||
      up.find('Z') == std::string::npos)
    malformed(line, "bad rotation order '" + std::string(tok) + "'");
  return up;
}

Eigen::Vector3d unit_direction(const Eigen::Vector3d& d) {
  // Already-unit vectors are kept bit-exact so written skeletons re-parse identically.
  const double n = d.norm();
  if (n == 0.0 || std::abs(n - 1.0) <= 8 * std::numeric_limits<double>::epsilon()) return d;
  return d / n;
}

}  // namespace

Skeleton parse_asf(std::string_view text_in) {
  LineReader r(text_in);
  Skeleton sk;
  Joint root;
  root.name = "root";
  root.parent = -1;

  bool have_root = false, have_units = false, have_hierarchy = false;
  std::vector<Joint> bones;
  std::vector<std::pair<std::string, std::vector<std::string>>> hierarchy;
  std::vector<std::size_t> hierarchy_lines;

  std::string section;
  for (r.pos = 0; r.pos < r.lines.size(); ++r.pos) {
    auto line = r.lines[r.pos];
    const std::size_t ln = r.pos + 1;
    if (line.empty()) continue;
    auto toks = text::split_ws(line);
    if (toks[0].front() == ':') {
      section = text::lower(toks[0]);
      if (section == ":version") {
        if (toks.size() > 1) sk.version = std::string(toks[1]);
      } else if (section == ":name") {
        if (toks.size() > 1) sk.name = std::string(toks[1]);
      } else if (section == ":units") {
        have_units = true;
      } else if (section == ":root") {
        have_root = true;
      } else if (section == ":hierarchy") {
        have_hierarchy = true;
      }
      continue;
    }

    if (section == ":units") {
      auto key = text::lower(toks[0]);
      if (toks.size() < 2) malformed(ln, "units entry without value");
      if (key == "mass") sk.units.mass = number(toks[1], ln);
      else if (key == "length") sk.units.length = number(toks[1], ln);
      else if (key == "angle") {
        auto u = text::lower(toks[1]);
        if (u == "deg" || u == "degree" || u == "degrees") sk.units.degrees = true;
        else if (u == "rad" || u == "radian" || u == "radians") sk.units.degrees = false;
        else malformed(ln, "unknown angle unit");
      }
    } else if (section == ":root") {
      auto key = text::lower(toks[0]);
      if (key == "order") {
        for (std::size_t i = 1; i < toks.size(); ++i) root.dof.push_back(parse_channel(toks[i], ln));
      } else if (key == "axis") {
        if (toks.size() < 2) malformed(ln, "root axis without order");
        root.axis_order = parse_order(toks[1], ln);
      } else if (key == "position") {
        sk.root_position = vec3(toks, 1, ln);
      } else if (key == "orientation") {
        root.axis = vec3(toks, 1, ln);
      }
    } else if (section == ":bonedata") {
      if (text::lower(toks[0]) != "begin") malformed(ln, "expected 'begin' in :bonedata");
      Joint bone;
      bool have_name = false, closed = false;
      for (++r.pos; r.pos < r.lines.size(); ++r.pos) {
        auto bl = r.lines[r.pos];
        const std::size_t bln = r.pos + 1;
        if (bl.empty()) continue;
        auto bt = text::split_ws(bl);
        auto key = text::lower(bt[0]);
        if (key == "end") {
          closed = true;
          break;
        }
        if (bt[0].front() == ':') malformed(bln, "unterminated bone block");
        if (key == "id") {
          if (bt.size() < 2) malformed(bln, "id without value");
          auto v = text::parse_int(bt[1]);
          if (!v) malformed(bln, "non-numeric field '" + std::string(bt[1]) + "'");
          bone.id = static_cast<int>(*v);
        } else if (key == "name") {
          if (bt.size() < 2) malformed(bln, "name without value");
          bone.name = std::string(bt[1]);
          have_name = true;
        } else if (key == "direction") {
          bone.direction = unit_direction(vec3(bt, 1, bln));
        } else if (key == "length") {
          if (bt.size() < 2) malformed(bln, "length without value");
          bone.length = number(bt[1], bln);
          if (bone.length < 0) malformed(bln, "negative bone length");
        } else if (key == "axis") {
          bone.axis = vec3(bt, 1, bln);
          if (bt.size() > 4) bone.axis_order = parse_order(bt[4], bln);
        } else if (key == "dof") {
          for (std::size_t i = 1; i < bt.size(); ++i) bone.dof.push_back(parse_channel(bt[i], bln));
        }
        // limits, bodymass, cofmass and continuation lines do not affect kinematics.
      }
      if (!closed) malformed(ln, "bone block without 'end'");
      if (!have_name) malformed(ln, "bone block without name");
      if (bone.name == "root") malformed(ln, "bone may not be named 'root'");
      for (const auto& b : bones)
        if (b.name == bone.name) malformed(ln, "duplicate bone '" + bone.name + "'");
      bones.push_back(std::move(bone));
    } else if (section == ":hierarchy") {
      auto key = text::lower(toks[0]);
      if (key == "begin" || key == "end") continue;
      std::vector<std::string> children;
      for (std::size_t i = 1; i < toks.size(); ++i) children.emplace_back(toks[i]);
      hierarchy.emplace_back(std::string(toks[0]), std::move(children));
      hierarchy_lines.push_back(ln);
    }
  }

  if (!have_units) fail(ErrorCode::MalformedAsf, "ASF: missing :units section");
  if (!have_root) fail(ErrorCode::MalformedAsf, "ASF: missing :root section");
  if (!bones.empty() && !have_hierarchy) fail(ErrorCode::MalformedAsf, "ASF: missing :hierarchy section");

  auto bone_index = [&](const std::string& n) -> int {
    for (std::size_t i = 0; i < bones.size(); ++i)
      if (bones[i].name == n) return static_cast<int>(i);
    return -1;
  };

  // Children lists keyed by parent name ("root" or a bone).
  std::map<std::string, std::vector<int>> children_of;
  std::vector<int> parent_seen(bones.size(), 0);
  for (std::size_t h = 0; h < hierarchy.size(); ++h) {
    const auto& [parent, kids] = hierarchy[h];
    if (parent != "root" && bone_index(parent) < 0)
      malformed(hierarchy_lines[h], "hierarchy names undeclared bone '" + parent + "'");
    for (const auto& k : kids) {
      int bi = bone_index(k);
      if (bi < 0) malformed(hierarchy_lines[h], "hierarchy names undeclared bone '" + k + "'");
      if (parent_seen[bi]++) malformed(hierarchy_lines[h], "bone '" + k + "' has two parents");
      children_of[parent].push_back(bi);
    }
  }

  // Depth-first pre-order from the root, children in hierarchy order.
  sk.joints.push_back(root);
  std::vector<int> placed(bones.size(), 0);
  auto visit = [&](auto&& self, const std::string& name, int joint_idx) -> void {
    auto it = children_of.find(name);
    if (it == children_of.end()) return;
    for (int c : it->second) {
      placed[c] = 1;
      Joint j = bones[c];
      j.parent = joint_idx;
      sk.joints.push_back(std::move(j));
      self(self, bones[c].name, static_cast<int>(sk.joints.size() - 1));
    }
  };
  visit(visit, "root", 0);
  for (std::size_t i = 0; i < bones.size(); ++i)
    if (!placed[i])
      fail(ErrorCode::MalformedAsf, "ASF: bone '" + bones[i].name + "' is not reachable from root");
  return sk;
}

Skeleton load_asf(const std::string& path) {
  try {
    return parse_asf(text::read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

namespace {

void put_vec(std::ostringstream& os, const Eigen::Vector3d& v) {
  os << text::shortest(v.x()) << ' ' << text::shortest(v.y()) << ' ' << text::shortest(v.z());
}

}  // namespace

std::string write_asf(const Skeleton& sk) {
  std::ostringstream os;
  os << ":version " << sk.version << "\n";
  os << ":name " << sk.name << "\n";
  os << ":units\n";
  os << "  mass " << text::shortest(sk.units.mass) << "\n";
  os << "  length " << text::shortest(sk.units.length) << "\n";
  os << "  angle " << (sk.units.degrees ? "deg" : "rad") << "\n";
  os << ":root\n";
  if (!sk.joints.empty()) {
    const Joint& root = sk.root();
    os << "  order";
    for (auto c : root.dof) os << ' ' << text::lower(channel_name(c));
    os << "\n  axis " << root.axis_order << "\n  position ";
    put_vec(os, sk.root_position);
    os << "\n  orientation ";
    put_vec(os, root.axis);
    os << "\n";
  }
  os << ":bonedata\n";
  for (std::size_t i = 1; i < sk.joints.size(); ++i) {
    const Joint& b = sk.joints[i];
    os << "  begin\n";
    os << "    id " << b.id << "\n";
    os << "    name " << b.name << "\n";
    os << "    direction ";
    put_vec(os, b.direction);
    os << "\n    length " << text::shortest(b.length) << "\n";
    os << "    axis ";
    put_vec(os, b.axis);
    os << ' ' << b.axis_order << "\n";
    if (!b.dof.empty()) {
      os << "    dof";
      for (auto c : b.dof) os << ' ' << channel_name(c);
      os << "\n";
    }
    os << "  end\n";
  }
  os << ":hierarchy\n  begin\n";
  for (std::size_t p = 0; p < sk.joints.size(); ++p) {
    std::vector<std::size_t> kids;
    for (std::size_t c = 1; c < sk.joints.size(); ++c)
      if (sk.joints[c].parent == static_cast<int>(p)) kids.push_back(c);
    if (kids.empty()) continue;
    os << "    " << sk.joints[p].name;
    for (auto c : kids) os << ' ' << sk.joints[c].name;
    os << "\n";
  }
  os << "  end\n";
  return os.str();
}

bool same_topology(const Skeleton& a, const Skeleton& b) noexcept {
  if (a.joints.size() != b.joints.size()) return false;
  for (std::size_t i = 0; i < a.joints.size(); ++i) {
    const auto& x = a.joints[i];
    const auto& y = b.joints[i];
    if (x.name != y.name || x.parent != y.parent || x.dof != y.dof) return false;
  }
  return true;
}

Skeleton mean_skeleton(std::span<const Skeleton> skeletons) {
  if (skeletons.empty()) fail(ErrorCode::InvalidArgument, "mean_skeleton: no skeletons");
  const Skeleton& first = skeletons.front();
  for (const auto& s : skeletons) {
    if (!same_topology(first, s))
      fail(ErrorCode::HeterogeneousTopology, "mean_skeleton: skeletons differ in joints, hierarchy or dof");
    if (s.units.degrees != first.units.degrees)
      fail(ErrorCode::HeterogeneousTopology, "mean_skeleton: skeletons differ in angle unit");
  }
  Skeleton out = first;
  const double n = static_cast<double>(skeletons.size());
  out.root_position.setZero();
  out.units.mass = 0;
  out.units.length = 0;
  for (auto& j : out.joints) {
    j.direction.setZero();
    j.length = 0;
    j.axis.setZero();
  }
  for (const auto& s : skeletons) {
    out.root_position += s.root_position / n;
    out.units.mass += s.units.mass / n;
    out.units.length += s.units.length / n;
    for (std::size_t i = 0; i < out.joints.size(); ++i) {
      out.joints[i].direction += s.joints[i].direction;
      out.joints[i].length += s.joints[i].length / n;
      out.joints[i].axis += s.joints[i].axis / n;
    }
  }
  for (auto& j : out.joints) {
    double norm = j.direction.norm();
    if (norm > 0) j.direction /= norm;
  }
  return out;
}

}  // namespace gaitrec
