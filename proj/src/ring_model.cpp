#include "ringgather/ring_model.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace ringgather {

char color_letter(Color c)
{
  switch (c) {
    case Color::White: return 'W';
    case Color::Red: return 'R';
    case Color::Blue: return 'B';
    case Color::Purple: return 'P';
  }
  return '?';
}

Color color_from_letter(char ch)
{
  switch (ch) {
    case 'W': case 'w': return Color::White;
    case 'R': case 'r': return Color::Red;
    case 'B': case 'b': return Color::Blue;
    case 'P': case 'p': return Color::Purple;
    default: break;
  }
  throw RingError(std::string("unknown color letter '") + ch + "'");
}

std::string ColorSet::str() const
{
  if (empty())
    return "_";
  std::string out;
  for (int c = 0; c < kColorCount; ++c) {
    if (contains(static_cast<Color>(c))) {
      if (!out.empty())
        out += ',';
      out += color_letter(static_cast<Color>(c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(int n, int phi, std::vector<Robot> robots)
    : n_(n), phi_(phi), robots_(std::move(robots))
{
  if (n_ < 3)
    throw RingError("ring needs at least 3 nodes");
  if (phi_ < 1)
    throw RingError("visibility radius must be >= 1");
  if (robots_.empty())
    throw RingError("configuration needs at least one robot");
  for (auto& r : robots_)
    r.node = wrap(r.node);
  std::vector<int> ids;
  ids.reserve(robots_.size());
  for (const auto& r : robots_)
    ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw RingError("robot ids must be unique");
}

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos)
      break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

Configuration Configuration::parse(std::string_view pattern, int n, int phi)
{
  pattern = trim(pattern);
  if (pattern.empty())
    throw RingError("empty placement pattern");
  auto nodes = split(pattern, '|');
  int ring = n == 0 ? static_cast<int>(nodes.size()) : n;
  if (static_cast<int>(nodes.size()) > ring)
    throw RingError("pattern has " + std::to_string(nodes.size()) + " nodes but ring size is " +
                    std::to_string(ring));
  std::vector<Robot> robots;
  int next_id = 0;
  for (std::size_t node = 0; node < nodes.size(); ++node) {
    auto tok = trim(nodes[node]);
    if (tok.empty() || tok == "_")
      continue;
    for (auto item : split(tok, ',')) {
      item = trim(item);
      if (item.empty())
        throw RingError("empty color entry at node " + std::to_string(node));
      Color c = color_from_letter(item.front());
      item.remove_prefix(1);
      int count = 1;
      if (!item.empty()) {
        if (item.front() == 'x' || item.front() == '*')
          item.remove_prefix(1);
        else if (item.starts_with("\xC3\x97"))
          item.remove_prefix(2);
        else
          throw RingError("unexpected text in node " + std::to_string(node));
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), count);
        if (ec != std::errc() || ptr != item.data() + item.size() || count < 1)
          throw RingError("bad multiplicity at node " + std::to_string(node));
      }
      for (int k = 0; k < count; ++k)
        robots.push_back(Robot{next_id++, static_cast<int>(node), c});
    }
  }
  return Configuration(ring, phi, std::move(robots));
}

std::string Configuration::pattern() const
{
  std::vector<std::vector<char>> per_node(static_cast<std::size_t>(n_));
  for (const auto& r : robots_)
    per_node[static_cast<std::size_t>(r.node)].push_back(color_letter(r.color));
  const std::string order = "WRBP";
  std::string out;
  for (int i = 0; i < n_; ++i) {
    if (i > 0)
      out += '|';
    auto& letters = per_node[static_cast<std::size_t>(i)];
    if (letters.empty()) {
      out += '_';
      continue;
    }
    std::sort(letters.begin(), letters.end(),
              [&](char a, char b) { return order.find(a) < order.find(b); });
    for (std::size_t k = 0; k < letters.size(); ++k) {
      if (k > 0)
        out += ',';
      out += letters[k];
    }
  }
  return out;
}

std::size_t Configuration::index_of(int robot_id) const
{
  for (std::size_t i = 0; i < robots_.size(); ++i)
    if (robots_[i].id == robot_id)
      return i;
  throw RingError("unknown robot id " + std::to_string(robot_id));
}

ColorSet Configuration::colors_at(int node) const
{
  node = wrap(node);
  ColorSet s;
  for (const auto& r : robots_)
    if (r.node == node)
      s.insert(r.color);
  return s;
}

std::vector<ColorSet> Configuration::node_colors() const
{
  std::vector<ColorSet> out(static_cast<std::size_t>(n_));
  for (const auto& r : robots_)
    out[static_cast<std::size_t>(r.node)].insert(r.color);
  return out;
}

std::vector<int> Configuration::robots_per_node() const
{
  std::vector<int> out(static_cast<std::size_t>(n_), 0);
  for (const auto& r : robots_)
    ++out[static_cast<std::size_t>(r.node)];
  return out;
}

std::vector<int> Configuration::occupied_nodes() const
{
  std::vector<int> out;
  auto counts = robots_per_node();
  for (int i = 0; i < n_; ++i)
    if (counts[static_cast<std::size_t>(i)] > 0)
      out.push_back(i);
  return out;
}

Configuration Configuration::with_robot(std::size_t index, int node, Color color) const
{
  Configuration copy = *this;
  copy.robots_.at(index).node = wrap(node);
  copy.robots_.at(index).color = color;
  return copy;
}

// ---------------------------------------------------------------------------
// Views

View View::reversed() const
{
  View v = *this;
  std::reverse(v.cells.begin(), v.cells.end());
  return v;
}

std::string View::str() const
{
  std::string out = "(";
  int center = phi();
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
    if (i > 0)
      out += ' ';
    if (i == center)
      out += '[';
    out += cells[static_cast<std::size_t>(i)].str();
    if (i == center) {
      out += ':';
      out += color_letter(self_color);
      out += ']';
    }
  }
  out += ')';
  return out;
}

View view_of(const Configuration& config, int robot_id, Orientation orientation)
{
  const Robot& r = config.robot(robot_id);
  const int phi = config.phi();
  const int step = step_of(orientation);
  auto sets = config.node_colors();
  View v;
  v.self_color = r.color;
  v.cells.reserve(static_cast<std::size_t>(2 * phi + 1));
  for (int k = -phi; k <= phi; ++k)
    v.cells.push_back(sets[static_cast<std::size_t>(config.wrap(r.node + step * k))]);
  return v;
}

namespace {

bool side_empty(const std::vector<ColorSet>& sets, const Configuration& config, int node, int step)
{
  for (int k = 1; k <= config.phi(); ++k)
    if (!sets[static_cast<std::size_t>(config.wrap(node + step * k))].empty())
      return false;
  return true;
}

}  // namespace

std::vector<int> borders(const Configuration& config)
{
  auto sets = config.node_colors();
  std::vector<int> out;
  for (int u : config.occupied_nodes()) {
    bool left = side_empty(sets, config, u, -1);
    bool right = side_empty(sets, config, u, +1);
    if (left != right)
      out.push_back(u);
  }
  return out;
}

bool is_gathered(const Configuration& config)
{
  const int first = config.robots().front().node;
  return std::all_of(config.robots().begin(), config.robots().end(),
                     [&](const Robot& r) { return r.node == first; });
}

bool visibility_connected(const Configuration& config)
{
  auto occ = config.occupied_nodes();
  if (occ.size() <= 1)
    return true;
  int long_gaps = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    int a = occ[i];
    int b = occ[(i + 1) % occ.size()];
    int dist = config.wrap(b - a);
    if (dist == 0)
      dist = config.n();
    if (dist > config.phi())
      ++long_gaps;
  }
  return long_gaps <= 1;
}

std::vector<int> symmetric_edges(const Configuration& config)
{
  std::vector<int> out;
  if (config.occupied_nodes().size() < 2)
    return out;
  auto sets = config.node_colors();
  const int n = config.n();
  for (int i = 0; i < n; ++i) {
    bool ok = true;
    // On odd rings the mirror fixes one node; a robot there has no partner
    // (a gathered configuration is never symmetric).
    for (int x = 0; x < n && ok; ++x) {
      const int y = config.wrap(2 * i + 1 - x);
      ok = sets[static_cast<std::size_t>(x)] == sets[static_cast<std::size_t>(y)] &&
           (x != y || sets[static_cast<std::size_t>(x)].empty());
    }
    if (ok)
      out.push_back(i);
  }
  return out;
}

bool is_edge_view_symmetric(const Configuration& config)
{
  return !symmetric_edges(config).empty();
}

// ---------------------------------------------------------------------------
// Arc metrics

Arc robot_arc(const Configuration& config)
{
  if (is_gathered(config))
    return Arc{config.robots().front().node, 1};
  auto b = borders(config);
  if (b.size() != 2)
    throw RingError("assumption violated: expected two borders, found " + std::to_string(b.size()));
  const int n = config.n();
  Arc first{b[0], config.wrap(b[1] - b[0]) + 1};
  Arc second{b[1], config.wrap(b[0] - b[1]) + 1};
  auto holds_all = [&](const Arc& arc) {
    return std::all_of(config.robots().begin(), config.robots().end(),
                       [&](const Robot& r) { return arc.contains(r.node, n); });
  };
  bool a = holds_all(first);
  bool c = holds_all(second);
  if (a && c)
    return second.m < first.m ? second : first;
  if (a)
    return first;
  if (c)
    return second;
  throw RingError("assumption violated: robots lie on both sides of the borders");
}

ArcMetrics metrics(const Configuration& config)
{
  ArcMetrics out;
  const int n = config.n();
  auto occupied = config.occupied_nodes();
  int run = 0;
  int best = 0;
  auto counts = config.robots_per_node();
  for (int k = 0; k < 2 * n; ++k) {
    if (counts[static_cast<std::size_t>(k % n)] == 0) {
      run = std::min(run + 1, n);
      best = std::max(best, run);
    } else {
      run = 0;
    }
  }
  out.h_max = best;
  Arc arc = robot_arc(config);
  out.m = arc.m;
  out.d = arc.m - 1;
  out.o = 0;
  int last = -1;
  for (int idx = 0; idx < arc.m; ++idx) {
    if (counts[static_cast<std::size_t>(arc.node_at(idx, n))] == 0)
      continue;
    ++out.o;
    if (last >= 0)
      out.h_inner = std::max(out.h_inner, idx - last);
    last = idx;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical forms

std::vector<RingTransform> dihedral_group(int n)
{
  std::vector<RingTransform> g;
  g.reserve(static_cast<std::size_t>(2 * n));
  for (int s = 0; s < n; ++s) {
    g.push_back({s, false});
    g.push_back({s, true});
  }
  return g;
}

std::size_t CanonicalFormHash::operator()(const CanonicalForm& f) const
{
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(f.n * 131 + f.phi);
  for (auto w : f.words) {
    h ^= w;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

CanonicalForm canonicalize(const Configuration& config)
{
  CanonicalForm best;
  best.n = config.n();
  best.phi = config.phi();
  std::vector<std::uint32_t> words(config.robot_count());
  bool have = false;
  for (const auto& t : dihedral_group(config.n())) {
    for (std::size_t i = 0; i < config.robot_count(); ++i) {
      const auto& r = config.robots()[i];
      words[i] = static_cast<std::uint32_t>(t.apply(r.node, config.n())) << 8 |
                 static_cast<std::uint32_t>(r.color);
    }
    std::sort(words.begin(), words.end());
    if (!have || words < best.words) {
      best.words = words;
      have = true;
    }
  }
  return best;
}

Configuration from_canonical(const CanonicalForm& form)
{
  std::vector<Robot> robots;
  int id = 0;
  for (auto w : form.words)
    robots.push_back(Robot{id++, static_cast<int>(w >> 8), static_cast<Color>(w & 0xff)});
  return Configuration(form.n, form.phi, std::move(robots));
}

std::uint64_t fnv1a(std::string_view bytes)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ringgather
