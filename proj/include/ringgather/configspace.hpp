// Valid initial configurations: all White, two borders, a connected
// visibility graph and a largest hole wider than phi.

#pragma once

#include "ringgather/ring_model.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ringgather {

enum class Parity {
  MOdd,       // Algorithm 1 instances
  MEvenOOdd,  // Algorithm 2 instances
  Any,
};

const char* parity_name(Parity p);
Parity parity_from_name(const std::string& name);  // "m-odd", "m-even-o-odd", "any"

struct InitFilter
{
  std::pair<int, int> n_range{5, 10};
  std::pair<int, int> r_range{2, 5};
  int phi = 1;
  bool towers_allowed = true;
  int tower_cap = 3;  // robots per node when towers are allowed
  Parity parity = Parity::Any;
  bool dedup = true;  // one configuration per rotation/reflection class

  // Throws RingError when a range is empty or phi is too small for the parity.
  void validate() const;
};

// Calls `emit` for each matching configuration, n ascending; returns the count.
std::size_t enumerate_initial(const InitFilter& filter, const std::function<void(const Configuration&)>& emit);
std::vector<Configuration> enumerate_initial(const InitFilter& filter);

// Human-readable reasons the configuration is not a valid initial one; empty
// when it is.
std::vector<std::string> validate_initial(const Configuration& config, Parity parity);

}  // namespace ringgather
