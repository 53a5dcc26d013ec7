#include "ringgather/configspace.hpp"

#include <set>

namespace ringgather {

const char* parity_name(Parity p)
{
  switch (p) {
    case Parity::MOdd: return "m-odd";
    case Parity::MEvenOOdd: return "m-even-o-odd";
    case Parity::Any: return "any";
  }
  return "?";
}

Parity parity_from_name(const std::string& name)
{
  if (name == "m-odd" || name == "m_odd")
    return Parity::MOdd;
  if (name == "m-even-o-odd" || name == "m_even_o_odd")
    return Parity::MEvenOOdd;
  if (name == "any")
    return Parity::Any;
  throw RingError("unknown parity '" + name + "'");
}

void InitFilter::validate() const
{
  if (n_range.first > n_range.second || n_range.first < 3)
    throw RingError("invalid ring size range");
  if (r_range.first > r_range.second || r_range.first < 1)
    throw RingError("invalid robot count range");
  if (phi < 1)
    throw RingError("phi must be at least 1");
  if (parity == Parity::MEvenOOdd && phi < 2)
    throw RingError("parity m-even-o-odd requires phi>=2");
  if (towers_allowed && tower_cap < 1)
    throw RingError("tower cap must be at least 1");
}

std::vector<std::string> validate_initial(const Configuration& config, Parity parity)
{
  std::vector<std::string> out;
  for (const auto& r : config.robots())
    if (r.color != Color::White) {
      out.push_back("robot " + std::to_string(r.id) + " is not White");
      break;
    }
  if (config.occupied_nodes().size() < 2)
    out.push_back("fewer than two occupied nodes");
  if (!visibility_connected(config))
    out.push_back("visibility graph disconnected");
  const auto b = borders(config);
  if (b.size() != 2) {
    out.push_back("expected two borders, found " + std::to_string(b.size()));
    return out;
  }
  ArcMetrics m;
  try {
    m = metrics(config);
  } catch (const RingError& e) {
    out.push_back(e.what());
    return out;
  }
  if (m.h_max <= config.phi())
    out.push_back("largest hole " + std::to_string(m.h_max) + " not wider than phi");
  if (m.h_inner > config.phi())
    out.push_back("inner gap " + std::to_string(m.h_inner) + " exceeds phi");
  if (parity == Parity::MOdd && m.m % 2 == 0)
    out.push_back("M_init even");
  if (parity == Parity::MEvenOOdd) {
    if (m.m % 2 != 0)
      out.push_back("M_init odd");
    if (m.o % 2 == 0)
      out.push_back("O_init even");
  }
  return out;
}

namespace {

// Advances `mult` (values in 1..cap) like an odometer; false when exhausted.
bool next_multiplicity(std::vector<int>& mult, int cap)
{
  for (auto& m : mult) {
    if (m < cap) {
      ++m;
      return true;
    }
    m = 1;
  }
  return false;
}

}  // namespace

std::size_t enumerate_initial(const InitFilter& f, const std::function<void(const Configuration&)>& emit)
{
  f.validate();
  const int cap = f.towers_allowed ? std::min(f.tower_cap, f.r_range.second) : 1;
  std::size_t count = 0;
  for (int n = f.n_range.first; n <= f.n_range.second; ++n) {
    std::set<CanonicalForm> seen;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> nodes;
      for (int u = 0; u < n; ++u)
        if (mask & (1u << u))
          nodes.push_back(u);
      if (static_cast<int>(nodes.size()) < 2 || static_cast<int>(nodes.size()) > f.r_range.second)
        continue;
      std::vector<Robot> probe;
      for (int u : nodes)
        probe.push_back(Robot{static_cast<int>(probe.size()), u, Color::White});
      if (!validate_initial(Configuration(n, f.phi, probe), f.parity).empty())
        continue;
      std::vector<int> mult(nodes.size(), 1);
      do {
        int r = 0;
        for (int m : mult)
          r += m;
        if (r < f.r_range.first || r > f.r_range.second)
          continue;
        std::vector<Robot> robots;
        for (std::size_t i = 0; i < nodes.size(); ++i)
          for (int k = 0; k < mult[i]; ++k)
            robots.push_back(Robot{static_cast<int>(robots.size()), nodes[i], Color::White});
        Configuration c(n, f.phi, std::move(robots));
        if (f.dedup && !seen.insert(canonicalize(c)).second)
          continue;
        emit(c);
        ++count;
      } while (next_multiplicity(mult, cap));
    }
  }
  return count;
}

std::vector<Configuration> enumerate_initial(const InitFilter& filter)
{
  std::vector<Configuration> out;
  enumerate_initial(filter, [&](const Configuration& c) { out.push_back(c); });
  return out;
}

}  // namespace ringgather
