#pragma once

#include <string>
#include <vector>

#include "delin/var.hpp"

namespace delin {

// Generating function P(s)/(1-s)^ddim of parametric derivative counts by order.
// Kept reduced: P(1) != 0 whenever ddim > 0.
class HilbertFn {
 public:
  HilbertFn() = default;
  HilbertFn(std::vector<long long> numerator, int ddim);

  const std::vector<long long>& numerator() const { return num_; }
  int ddim() const { return ddim_; }
  bool finite() const { return ddim_ == 0; }
  // Finite dimension; for infinite systems the leading multiplicity P(1).
  long long dim() const;
  long long leading() const;
  // Coefficient of s^k in the expansion.
  long long coefficient(int k) const;

  HilbertFn operator+(const HilbertFn& o) const;
  bool operator==(const HilbertFn& o) const { return num_ == o.num_ && ddim_ == o.ddim_; }

  // e.g. "s + 1/(1-s)" (polynomial part plus partial fractions in 1-s)
  std::string toString() const;
  // e.g. "(1 + s - s^2)/(1-s)"
  std::string toRationalString() const;

  // Contribution s^order / (1-s)^free.
  static HilbertFn monomial(int order, int free);

 private:
  void reduce();
  std::vector<long long> num_;
  int ddim_ = 0;
};

bool hilbertEqual(const HilbertFn& a, const HilbertFn& b);
int diffDim(const HilbertFn& h);
// True when a is certainly smaller than b as a solution-space size: finite
// below finite, finite below infinite, lower differential dimension, or equal
// differential dimension with smaller leading multiplicity.
bool hilbertBelow(const HilbertFn& a, const HilbertFn& b);

// Disjoint cone (base + multiplicative directions) of parametric multi-indices.
struct Cone {
  MultiIndex base{};
  std::vector<int> free;  // indices of multiplicative variables
};

// Janet-style decomposition of the complement of the monomial ideal
// generated by `leaders` in N^n. The first variable is split outermost.
std::vector<Cone> complementCones(const std::vector<MultiIndex>& leaders, int n);
HilbertFn hilbertOfCones(const std::vector<Cone>& cones);

}  // namespace delin
