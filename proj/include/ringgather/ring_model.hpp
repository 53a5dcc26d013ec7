// Rings, robots, lights and views.
//
// A configuration is a set of anonymous robots placed on the nodes of an
// undirected ring. Every robot carries a light. Robots see the set of colors
// present at each node within distance phi, never how many robots are there.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ringgather {

enum class Color : std::uint8_t { White = 0, Red = 1, Blue = 2, Purple = 3 };

inline constexpr int kColorCount = 4;

char color_letter(Color c);
Color color_from_letter(char ch);

// Raised when an operation is called outside its contract (unknown robot,
// malformed pattern, violated assumption ...).
class RingError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

// Set of colors present at one node.
class ColorSet
{
 public:
  constexpr ColorSet() = default;
  constexpr ColorSet(std::initializer_list<Color> colors)
  {
    for (Color c : colors)
      bits_ |= bit(c);
  }
  static constexpr ColorSet from_bits(std::uint8_t bits)
  {
    ColorSet s;
    s.bits_ = bits & 0x0f;
    return s;
  }

  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(Color c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool contains_all(ColorSet other) const
  {
    return (bits_ & other.bits_) == other.bits_;
  }
  constexpr int size() const
  {
    int k = 0;
    for (std::uint8_t b = bits_; b != 0; b &= b - 1)
      ++k;
    return k;
  }
  constexpr bool singly(Color c) const { return bits_ == bit(c); }
  constexpr void insert(Color c) { bits_ |= bit(c); }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(ColorSet, ColorSet) = default;

  // "_" for the empty set, otherwise letters in W,R,B,P order joined by ','.
  std::string str() const;

 private:
  static constexpr std::uint8_t bit(Color c)
  {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

struct Robot
{
  int id = 0;
  int node = 0;
  Color color = Color::White;

  friend bool operator==(const Robot&, const Robot&) = default;
};

// Clockwise walks toward increasing node indices.
enum class Orientation { Clockwise, CounterClockwise };

inline int step_of(Orientation o) { return o == Orientation::Clockwise ? 1 : -1; }

class Configuration
{
 public:
  Configuration(int n, int phi, std::vector<Robot> robots);

  // Parses the placement notation: nodes separated by '|', each node either
  // '_' or a comma list of color letters, a letter optionally followed by
  // 'x'/'*'/'×' and a count ("W|_|W,W|Wx3"). With n == 0 the ring size is
  // the number of nodes in the pattern; otherwise the pattern is embedded at
  // node 0 of a ring of n nodes. Robot ids are assigned in pattern order.
  static Configuration parse(std::string_view pattern, int n, int phi);

  // Full-ring pattern string, towers written as comma lists ("W,W").
  std::string pattern() const;

  int n() const { return n_; }
  int phi() const { return phi_; }
  const std::vector<Robot>& robots() const { return robots_; }
  std::size_t robot_count() const { return robots_.size(); }

  int wrap(int node) const { return ((node % n_) + n_) % n_; }

  // Index into robots() for the given id; throws RingError when absent.
  std::size_t index_of(int robot_id) const;
  const Robot& robot(int robot_id) const { return robots_[index_of(robot_id)]; }

  ColorSet colors_at(int node) const;
  std::vector<ColorSet> node_colors() const;
  std::vector<int> occupied_nodes() const;
  std::vector<int> robots_per_node() const;

  // Returns a copy with one robot relocated / recolored.
  Configuration with_robot(std::size_t index, int node, Color color) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  int n_;
  int phi_;
  std::vector<Robot> robots_;
};

struct View
{
  std::vector<ColorSet> cells;  // 2*phi + 1 entries, observer at the center
  Color self_color = Color::White;

  int phi() const { return static_cast<int>(cells.size() / 2); }
  View reversed() const;
  std::string str() const;

  friend bool operator==(const View&, const View&) = default;
};

View view_of(const Configuration& config, int robot_id, Orientation orientation);

// Occupied nodes whose robots see other robots in exactly one direction.
std::vector<int> borders(const Configuration& config);

bool is_gathered(const Configuration& config);

// Robots at distance <= phi see each other; true iff that graph is connected.
bool visibility_connected(const Configuration& config);

// Mirror-symmetric about some edge (i, i+1): node i-k and node i+k+1 host the
// same colors for every k. Requires at least two occupied nodes.
bool is_edge_view_symmetric(const Configuration& config);

// Left node i of every symmetric edge (i, i+1).
std::vector<int> symmetric_edges(const Configuration& config);

struct ArcMetrics
{
  int m = 1;        // nodes in the arc between the two borders, inclusive
  int o = 1;        // occupied nodes in the arc
  int d = 0;        // distance between the border nodes
  int h_inner = 0;  // largest distance between consecutive occupied nodes
  int h_max = 0;    // largest run of empty nodes on the ring
};

// The arc holding every robot, walked clockwise from `start` for `m` nodes.
struct Arc
{
  int start = 0;
  int m = 1;

  bool contains(int node, int n) const
  {
    return ((node - start) % n + n) % n < m;
  }
  // Position of node along the arc; only meaningful if contains().
  int index_of(int node, int n) const { return ((node - start) % n + n) % n; }
  int node_at(int index, int n) const { return ((start + index) % n + n) % n; }
};

// Throws RingError("assumption violated") unless there are exactly two
// borders or the configuration is gathered.
Arc robot_arc(const Configuration& config);
ArcMetrics metrics(const Configuration& config);

// Rotation by `shift` after an optional reflection x -> -x.
struct RingTransform
{
  int shift = 0;
  bool reflect = false;

  int apply(int node, int n) const
  {
    int x = reflect ? -node : node;
    return (((x + shift) % n) + n) % n;
  }
  int apply_step(int step) const { return reflect ? -step : step; }
};

std::vector<RingTransform> dihedral_group(int n);

// Canonical representative of a configuration under rotation, reflection and
// robot-id permutation. Equal forms iff the configurations are isomorphic.
struct CanonicalForm
{
  int n = 0;
  int phi = 0;
  std::vector<std::uint32_t> words;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalFormHash
{
  std::size_t operator()(const CanonicalForm& f) const;
};

CanonicalForm canonicalize(const Configuration& config);
Configuration from_canonical(const CanonicalForm& form);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace ringgather
