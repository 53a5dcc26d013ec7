#include "ringgather/rules.hpp"

#include <sstream>

namespace ringgather {

PositionPredicate PositionPredicate::singly(Color c)
{
  PositionPredicate p(Kind::SinglyColored);
  p.colors_ = ColorSet{c};
  return p;
}

PositionPredicate PositionPredicate::contains(Color c)
{
  PositionPredicate p(Kind::Contains);
  p.colors_ = ColorSet{c};
  return p;
}

PositionPredicate PositionPredicate::not_contains(Color c)
{
  PositionPredicate p(Kind::NotContains);
  p.colors_ = ColorSet{c};
  return p;
}

PositionPredicate PositionPredicate::contains_all(ColorSet colors)
{
  PositionPredicate p(Kind::ContainsAll);
  p.colors_ = colors;
  return p;
}

PositionPredicate PositionPredicate::any_of(std::vector<PositionPredicate> options)
{
  PositionPredicate p(Kind::AnyOf);
  p.children_ = std::move(options);
  return p;
}

PositionPredicate PositionPredicate::all_of(std::vector<PositionPredicate> parts)
{
  PositionPredicate p(Kind::AllOf);
  p.children_ = std::move(parts);
  return p;
}

PositionPredicate PositionPredicate::negate(PositionPredicate inner)
{
  PositionPredicate p(Kind::Not);
  p.children_.push_back(std::move(inner));
  return p;
}

bool PositionPredicate::matches(ColorSet set) const
{
  switch (kind_) {
    case Kind::Empty: return set.empty();
    case Kind::Wildcard: return true;
    case Kind::NonEmpty: return !set.empty();
    case Kind::SinglyColored: return set == colors_;
    case Kind::Contains: return set.contains_all(colors_);
    case Kind::NotContains: return (set.bits() & colors_.bits()) == 0;
    case Kind::ContainsAll: return set.contains_all(colors_);
    case Kind::AnyOf:
      for (const auto& c : children_)
        if (c.matches(set))
          return true;
      return false;
    case Kind::AllOf:
      for (const auto& c : children_)
        if (!c.matches(set))
          return false;
      return true;
    case Kind::Not: return !children_.front().matches(set);
  }
  return false;
}

std::string PositionPredicate::str() const
{
  auto letters = [&](const char* sep) {
    std::string s;
    for (int c = 0; c < kColorCount; ++c) {
      if (colors_.contains(static_cast<Color>(c))) {
        if (!s.empty())
          s += sep;
        s += color_letter(static_cast<Color>(c));
      }
    }
    return s;
  };
  auto join = [&](const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < children_.size(); ++i) {
      if (i > 0)
        s += sep;
      s += children_[i].str();
    }
    return s;
  };
  switch (kind_) {
    case Kind::Empty: return "_";
    case Kind::Wildcard: return "?";
    case Kind::NonEmpty: return "?+";
    case Kind::SinglyColored: return letters("") + "!";
    case Kind::Contains: return letters("");
    case Kind::NotContains: return "~" + letters("");
    case Kind::ContainsAll: return "(" + letters("&") + ")";
    case Kind::AnyOf: return "(" + join(",") + ")";
    case Kind::AllOf: return "(" + join("&") + ")";
    case Kind::Not: return "~" + children_.front().str();
  }
  return "";
}

// ---------------------------------------------------------------------------

int GuardSegment::count(int phi) const
{
  switch (length) {
    case SegmentLength::Phi: return phi;
    case SegmentLength::PhiMinusOne: return phi - 1;
    case SegmentLength::One: return 1;
  }
  return 0;
}

bool GuardSegment::matches(const ColorSet* cells, int phi) const
{
  const int k = count(phi);
  bool all = true;
  for (int i = 0; i < k && all; ++i)
    all = predicate.matches(cells[i]);
  return negated_as_block ? !all : all;
}

std::string GuardSegment::str() const
{
  std::string base = predicate.str();
  switch (length) {
    case SegmentLength::Phi: base += "^phi"; break;
    case SegmentLength::PhiMinusOne: base += "^(phi-1)"; break;
    case SegmentLength::One: break;
  }
  return negated_as_block ? "~[" + base + "]" : base;
}

int Rule::outward_cells(int phi) const
{
  int k = 0;
  for (const auto& s : outward)
    k += s.count(phi);
  return k;
}

int Rule::inward_cells(int phi) const
{
  int k = 0;
  for (const auto& s : inward)
    k += s.count(phi);
  return k;
}

std::string Rule::str() const
{
  std::ostringstream os;
  os << label << ":";
  for (const auto& s : outward)
    os << ' ' << s.str();
  os << " [" << self_node.str();
  if (self_own.kind() != PositionPredicate::Kind::Wildcard)
    os << " own " << self_own.str();
  os << ']';
  for (const auto& s : inward)
    os << ' ' << s.str();
  os << " :: " << (new_color ? std::string(1, color_letter(*new_color)) : std::string("-"))
     << ", " << (moves ? "->" : "stay");
  return os.str();
}

// ---------------------------------------------------------------------------

Algorithm::Algorithm(std::string name, ColorSet colors, std::vector<Rule> rules, int min_phi)
    : name_(std::move(name)), colors_(colors), rules_(std::move(rules)), min_phi_(min_phi)
{
  if (rules_.size() >= kNoRule)
    throw RingError("too many rules");
}

const std::string& Algorithm::label(std::uint8_t rule) const
{
  static const std::string none = "none";
  if (rule == kNoRule || rule >= rules_.size())
    return none;
  return rules_[rule].label;
}

std::optional<std::uint8_t> Algorithm::find(const std::string& label) const
{
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].label == label)
      return static_cast<std::uint8_t>(i);
  return std::nullopt;
}

std::string Algorithm::dump() const
{
  std::ostringstream os;
  os << "# " << name_ << " colors=" << colors_.str() << " min_phi=" << min_phi_ << '\n';
  for (const auto& r : rules_)
    os << r.str() << '\n';
  return os.str();
}

namespace {

using P = PositionPredicate;

GuardSegment seg(P pred, SegmentLength len = SegmentLength::One, bool negated = false)
{
  return GuardSegment{std::move(pred), len, negated};
}

GuardSegment empty_phi() { return seg(P::empty(), SegmentLength::Phi); }
GuardSegment not_all_empty_phi() { return seg(P::empty(), SegmentLength::Phi, true); }
GuardSegment not_all_empty_tail() { return seg(P::empty(), SegmentLength::PhiMinusOne, true); }
GuardSegment empty_tail() { return seg(P::empty(), SegmentLength::PhiMinusOne); }

P question(QuestionMark q) { return q == QuestionMark::Wildcard ? P::wildcard() : P::non_empty(); }

Rule rule(std::string label, P self_node, P self_own, std::vector<GuardSegment> inward,
          std::optional<Color> color, bool moves)
{
  Rule r;
  r.label = std::move(label);
  r.self_node = std::move(self_node);
  r.self_own = std::move(self_own);
  r.outward = {empty_phi()};
  r.inward = std::move(inward);
  r.new_color = color;
  r.moves = moves;
  return r;
}

Rule singly_rule(std::string label, Color self, std::vector<GuardSegment> inward,
                 std::optional<Color> color, bool moves)
{
  return rule(std::move(label), P::singly(self), P::contains(self), std::move(inward), color, moves);
}

Rule gathered_rule(QuestionMark q)
{
  return rule("R0", question(q), P::wildcard(), {empty_phi()}, std::nullopt, false);
}

Rule start_rule()
{
  return singly_rule("R1", Color::White, {not_all_empty_phi()}, Color::Red, false);
}

Rule adopt_rule(std::string label, Color border)
{
  return rule(std::move(label), P::contains(border), P::contains(Color::White),
              {not_all_empty_phi()}, border, false);
}

Rule white_neighbor_rule(std::string label, Color self, Color next, QuestionMark q)
{
  return singly_rule(std::move(label), self,
                     {seg(P::contains(Color::White)), seg(question(q), SegmentLength::PhiMinusOne)},
                     next, true);
}

}  // namespace

Algorithm algorithm1(QuestionMark q)
{
  using C = Color;
  std::vector<Rule> rules;
  rules.push_back(gathered_rule(q));
  rules.push_back(start_rule());
  rules.push_back(singly_rule("R2a", C::Red,
                              {seg(P::any_of({P::empty(), P::singly(C::Blue)})), not_all_empty_tail()},
                              C::Blue, true));
  rules.push_back(white_neighbor_rule("R2b", C::Red, C::Blue, q));
  rules.push_back(singly_rule("R3a", C::Blue,
                              {seg(P::any_of({P::empty(), P::singly(C::Red)})), not_all_empty_tail()},
                              C::Red, true));
  rules.push_back(white_neighbor_rule("R3b", C::Blue, C::Red, q));
  rules.push_back(adopt_rule("R4a", C::Red));
  rules.push_back(adopt_rule("R4b", C::Blue));
  rules.push_back(singly_rule("R5", C::Red, {seg(P::singly(C::Blue)), empty_tail()}, C::Blue, true));
  return Algorithm("alg1", ColorSet{C::White, C::Red, C::Blue}, std::move(rules), 1);
}

Algorithm algorithm2(QuestionMark q)
{
  using C = Color;
  auto only = [](C keep) { return P::all_of({P::contains(keep), P::not_contains(C::White)}); };
  std::vector<Rule> rules;
  rules.push_back(gathered_rule(q));
  rules.push_back(start_rule());
  rules.push_back(singly_rule("R2a-1", C::Red, {seg(P::empty()), not_all_empty_tail()}, std::nullopt, true));
  rules.push_back(singly_rule("R2a-2", C::Red, {seg(only(C::Red)), not_all_empty_tail()}, std::nullopt, true));
  rules.push_back(white_neighbor_rule("R2b", C::Red, C::Blue, q));
  rules.push_back(singly_rule("R3a-1", C::Blue, {seg(P::empty()), not_all_empty_tail()}, std::nullopt, true));
  rules.push_back(singly_rule("R3a-2", C::Blue, {seg(only(C::Blue)), not_all_empty_tail()}, std::nullopt, true));
  rules.push_back(white_neighbor_rule("R3b", C::Blue, C::Red, q));
  rules.push_back(adopt_rule("R4a", C::Red));
  rules.push_back(adopt_rule("R4b", C::Blue));
  rules.push_back(rule("R5a", question(q), P::wildcard(), {seg(P::contains(C::Purple)), empty_tail()},
                       std::nullopt, true));
  rules.push_back(singly_rule("R5b-1", C::Blue, {seg(P::singly(C::Red)), empty_tail()}, C::Purple, false));
  rules.push_back(singly_rule("R5b-2", C::Blue, {seg(P::contains_all({C::Red, C::Blue})), empty_tail()},
                              C::Purple, false));
  rules.push_back(rule("R5b-3", P::contains(C::Red), P::contains(C::Blue),
                       {seg(P::singly(C::Red)), empty_tail()}, C::Purple, false));
  return Algorithm("alg2", ColorSet{C::White, C::Red, C::Blue, C::Purple}, std::move(rules), 2);
}

Algorithm algorithm_by_name(const std::string& name, QuestionMark q)
{
  if (name == "alg1")
    return algorithm1(q);
  if (name == "alg2")
    return algorithm2(q);
  throw RingError("unknown algorithm '" + name + "' (expected alg1 or alg2)");
}

bool eval_guard(const Rule& rule, const View& view)
{
  const int phi = view.phi();
  if (view.cells.size() % 2 == 0 || phi < 1)
    throw RingError("view length must be 2*phi+1");
  if (rule.outward_cells(phi) != phi || rule.inward_cells(phi) != phi)
    throw RingError("rule " + rule.label + " does not cover a view of radius " + std::to_string(phi));
  const ColorSet* cells = view.cells.data();
  if (!rule.self_own.matches(ColorSet{view.self_color}) || !rule.self_node.matches(cells[phi]))
    return false;
  const ColorSet* at = cells;
  for (const auto& s : rule.outward) {
    if (!s.matches(at, phi))
      return false;
    at += s.count(phi);
  }
  at = cells + phi + 1;
  for (const auto& s : rule.inward) {
    if (!s.matches(at, phi))
      return false;
    at += s.count(phi);
  }
  return true;
}

Decision decide(const Algorithm& alg, const Configuration& config, int robot_id, AmbiguityPolicy policy)
{
  if (config.phi() < alg.min_phi())
    throw RingError(alg.name() + " requires phi>=" + std::to_string(alg.min_phi()));
  const Robot& self = config.robot(robot_id);
  View cw = view_of(config, robot_id, Orientation::Clockwise);
  View ccw = cw.reversed();
  for (std::size_t i = 0; i < alg.rules().size(); ++i) {
    const Rule& r = alg.rules()[i];
    bool fwd = eval_guard(r, cw);
    bool back = eval_guard(r, ccw);
    if (!fwd && !back)
      continue;
    Decision d;
    d.rule = static_cast<std::uint8_t>(i);
    d.new_color = r.new_color.value_or(self.color);
    if (r.moves) {
      if (fwd && back) {
        d.ambiguous_direction = true;
        d.direction = policy == AmbiguityPolicy::PreferClockwise ? 1 : -1;
      } else {
        d.direction = fwd ? 1 : -1;
      }
    }
    return d;
  }
  Decision none;
  none.new_color = self.color;
  return none;
}

}  // namespace ringgather
