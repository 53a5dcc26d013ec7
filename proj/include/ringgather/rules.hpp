// Guarded rules over views and the two gathering rule tables.
//
// A rule reads a view as  <outward segments> [self] <inward segments>  where
// the outward side is the one the robot turns its back to. A rule that moves
// always moves one node toward the inward side.

#pragma once

#include "ringgather/ring_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ringgather {

class PositionPredicate
{
 public:
  enum class Kind {
    Empty,
    Wildcard,
    NonEmpty,
    SinglyColored,
    Contains,
    NotContains,
    ContainsAll,
    AnyOf,
    AllOf,
    Not,
  };

  static PositionPredicate empty() { return PositionPredicate(Kind::Empty); }
  static PositionPredicate wildcard() { return PositionPredicate(Kind::Wildcard); }
  static PositionPredicate non_empty() { return PositionPredicate(Kind::NonEmpty); }
  static PositionPredicate singly(Color c);
  static PositionPredicate contains(Color c);
  static PositionPredicate not_contains(Color c);
  static PositionPredicate contains_all(ColorSet colors);
  static PositionPredicate any_of(std::vector<PositionPredicate> options);
  static PositionPredicate all_of(std::vector<PositionPredicate> parts);
  static PositionPredicate negate(PositionPredicate inner);

  bool matches(ColorSet set) const;
  Kind kind() const { return kind_; }
  std::string str() const;

 private:
  explicit PositionPredicate(Kind k) : kind_(k) {}

  Kind kind_;
  ColorSet colors_;
  std::vector<PositionPredicate> children_;
};

enum class SegmentLength { Phi, PhiMinusOne, One };

struct GuardSegment
{
  PositionPredicate predicate;
  SegmentLength length = SegmentLength::One;
  bool negated_as_block = false;  // "not every cell matches"

  int count(int phi) const;
  bool matches(const ColorSet* cells, int phi) const;
  std::string str() const;
};

struct Rule
{
  std::string label;
  PositionPredicate self_own = PositionPredicate::wildcard();
  PositionPredicate self_node = PositionPredicate::wildcard();
  std::vector<GuardSegment> outward;
  std::vector<GuardSegment> inward;
  std::optional<Color> new_color;
  bool moves = false;

  int outward_cells(int phi) const;
  int inward_cells(int phi) const;
  std::string str() const;
};

// How '?' in rule tails is read.
enum class QuestionMark {
  Wildcard,  // any set, including the empty one (shipped reading)
  NonEmpty,  // strict reading: any non-empty set
};

class Algorithm
{
 public:
  Algorithm(std::string name, ColorSet colors, std::vector<Rule> rules, int min_phi);

  const std::string& name() const { return name_; }
  ColorSet colors() const { return colors_; }
  int color_count() const { return colors_.size(); }
  const std::vector<Rule>& rules() const { return rules_; }
  int min_phi() const { return min_phi_; }

  // "none" for kNoRule.
  const std::string& label(std::uint8_t rule) const;
  std::optional<std::uint8_t> find(const std::string& label) const;

  // One rule per line.
  std::string dump() const;

 private:
  std::string name_;
  ColorSet colors_;
  std::vector<Rule> rules_;
  int min_phi_;
};

inline constexpr std::uint8_t kNoRule = 0xff;

Algorithm algorithm1(QuestionMark qmark = QuestionMark::Wildcard);
Algorithm algorithm2(QuestionMark qmark = QuestionMark::Wildcard);

// Looks up "alg1" / "alg2".
Algorithm algorithm_by_name(const std::string& name, QuestionMark qmark = QuestionMark::Wildcard);

// Evaluates a rule against a view whose cells are read in view order
// (cells[0] is the outermost cell on the outward side).
bool eval_guard(const Rule& rule, const View& view);

struct Decision
{
  std::uint8_t rule = kNoRule;
  Color new_color = Color::White;
  int direction = 0;  // +1 clockwise, -1 counter-clockwise, 0 stay
  bool ambiguous_direction = false;

  bool moves() const { return direction != 0; }
  friend bool operator==(const Decision&, const Decision&) = default;
};

// Which way an adversary sends a robot whose move rule fires both ways.
enum class AmbiguityPolicy { PreferClockwise, PreferCounterClockwise };

Decision decide(const Algorithm& alg, const Configuration& config, int robot_id,
                AmbiguityPolicy policy = AmbiguityPolicy::PreferClockwise);

}  // namespace ringgather
