#include "delin/hilbert.hpp"

#include <algorithm>
#include <stdexcept>

namespace delin {

namespace {

using Coeffs = std::vector<long long>;

void trim(Coeffs& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Coeffs oneMinusSPow(int k) {
  Coeffs r{1};
  for (int i = 0; i < k; ++i) r = mul(r, Coeffs{1, -1});
  return r;
}

Coeffs add(Coeffs a, const Coeffs& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

long long binom(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long at1(const Coeffs& p) {
  long long s = 0;
  for (auto c : p) s += c;
  return s;
}

std::string polyInS(const Coeffs& p) {
  std::string s;
  for (std::size_t k = 0; k < p.size(); ++k) {
    long long c = p[k];
    if (c == 0) continue;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    long long a = c < 0 ? -c : c;
    std::string mono = k == 0 ? "" : (k == 1 ? "s" : "s^" + std::to_string(k));
    if (mono.empty())
      s += std::to_string(a);
    else if (a == 1)
      s += mono;
    else
      s += std::to_string(a) + "*" + mono;
  }
  return s.empty() ? "0" : s;
}

}  // namespace

HilbertFn::HilbertFn(std::vector<long long> numerator, int ddim) : num_(std::move(numerator)), ddim_(ddim) {
  if (ddim_ < 0) throw std::invalid_argument("negative differential dimension");
  trim(num_);
  reduce();
}

void HilbertFn::reduce() {
  while (ddim_ > 0 && at1(num_) == 0) {
    // P(s) = (1-s) Q(s) with Q_k = P_0 + ... + P_k
    Coeffs q(num_.empty() ? 0 : num_.size() - 1, 0);
    long long acc = 0;
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = (acc += num_[k]);
    trim(q);
    num_ = q;
    --ddim_;
  }
  if (num_.empty()) ddim_ = 0;
}

long long HilbertFn::dim() const {
  if (ddim_ > 0) throw std::logic_error("infinite dimensional");
  return at1(num_);
}

long long HilbertFn::leading() const { return at1(num_); }

long long HilbertFn::coefficient(int k) const {
  if (ddim_ == 0) return k < int(num_.size()) ? num_[k] : 0;
  long long s = 0;
  for (int j = 0; j < int(num_.size()) && j <= k; ++j) s += num_[j] * binom(k - j + ddim_ - 1, ddim_ - 1);
  return s;
}

HilbertFn HilbertFn::operator+(const HilbertFn& o) const {
  int d = std::max(ddim_, o.ddim_);
  Coeffs a = mul(num_, oneMinusSPow(d - ddim_));
  Coeffs b = mul(o.num_, oneMinusSPow(d - o.ddim_));
  return HilbertFn(add(a, b), d);
}

HilbertFn HilbertFn::monomial(int order, int free) {
  Coeffs p(order + 1, 0);
  p[order] = 1;
  return HilbertFn(p, free);
}

std::string HilbertFn::toString() const {
  if (num_.empty()) return "0";
  if (ddim_ == 0) return polyInS(num_);
  // Taylor coefficients b_j of P at s = 1 in powers of t = 1 - s.
  std::size_t N = num_.size();
  Coeffs b(N, 0);
  for (std::size_t j = 0; j < N; ++j) {
    // P(1 - t) = sum_k P_k (1 - t)^k, coefficient of t^j is sum_k P_k C(k,j) (-1)^j
    long long s = 0;
    for (std::size_t k = j; k < N; ++k) s += num_[k] * binom(k, j);
    b[j] = (j % 2) ? -s : s;
  }
  Coeffs polyPart;
  for (std::size_t j = ddim_; j < N; ++j) polyPart = add(polyPart, mul(Coeffs{b[j]}, oneMinusSPow(int(j) - ddim_)));
  std::string s = polyPart.empty() ? "" : polyInS(polyPart);
  for (int k = 1; k <= ddim_; ++k) {
    int j = ddim_ - k;
    long long c = j < int(N) ? b[j] : 0;
    if (c == 0) continue;
    std::string den = k == 1 ? "(1-s)" : "(1-s)^" + std::to_string(k);
    long long a = c < 0 ? -c : c;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    s += std::to_string(a) + "/" + den;
  }
  return s.empty() ? "0" : s;
}

std::string HilbertFn::toRationalString() const {
  std::string p = polyInS(num_);
  if (ddim_ == 0) return p;
  bool single = std::count_if(num_.begin(), num_.end(), [](long long c) { return c != 0; }) == 1 && at1(num_) > 0;
  std::string num = single ? p : "(" + p + ")";
  return num + "/(1-s)" + (ddim_ > 1 ? "^" + std::to_string(ddim_) : "");
}

bool hilbertEqual(const HilbertFn& a, const HilbertFn& b) { return a == b; }

int diffDim(const HilbertFn& h) { return h.ddim(); }

bool hilbertBelow(const HilbertFn& a, const HilbertFn& b) {
  if (b.finite()) return a.finite() && a.dim() < b.dim();
  if (a.finite()) return true;
  if (a.ddim() != b.ddim()) return a.ddim() < b.ddim();
  return a.leading() < b.leading();
}

namespace {

void coneRec(const std::vector<MultiIndex>& L, int v, int n, MultiIndex& prefix, std::vector<Cone>& out) {
  for (const auto& a : L) {
    bool zero = true;
    for (int i = v; i < n; ++i) zero = zero && a[i] == 0;
    if (zero) return;
  }
  if (v == n) {
    out.push_back({prefix, {}});
    return;
  }
  if (L.empty()) {
    Cone c{prefix, {}};
    for (int i = v; i < n; ++i) c.free.push_back(i);
    out.push_back(c);
    return;
  }
  int d = 0;
  for (const auto& a : L) d = std::max(d, int(a[v]));
  for (int j = 0; j <= d; ++j) {
    std::vector<MultiIndex> S;
    for (const auto& a : L)
      if (a[v] <= j) S.push_back(a);
    prefix[v] = std::uint8_t(j);
    std::size_t before = out.size();
    coneRec(S, v + 1, n, prefix, out);
    if (j == d)
      for (std::size_t k = before; k < out.size(); ++k) out[k].free.insert(out[k].free.begin(), v);
  }
  prefix[v] = 0;
}

}  // namespace

std::vector<Cone> complementCones(const std::vector<MultiIndex>& leaders, int n) {
  std::vector<Cone> out;
  MultiIndex prefix{};
  coneRec(leaders, 0, n, prefix, out);
  // cone(a, G) + cone(a + e_i, G + {i}) = cone(a, G + {i}) for i not in G;
  // merging keeps the data as few functions with as low vertices as possible.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t p = 0; p < out.size() && !merged; ++p)
      for (std::size_t q = 0; q < out.size() && !merged; ++q) {
        const Cone &A = out[p], &B = out[q];
        if (B.free.size() != A.free.size() + 1) continue;
        int i = -1, diff = 0;
        for (int k = 0; k < n; ++k)
          if (B.base[k] != A.base[k]) {
            ++diff;
            i = B.base[k] == A.base[k] + 1 ? k : -1;
          }
        if (diff != 1 || i < 0 || std::count(A.free.begin(), A.free.end(), i)) continue;
        std::vector<int> g = A.free;
        g.insert(std::upper_bound(g.begin(), g.end(), i), i);
        if (g != B.free) continue;
        out[p].free = g;
        out.erase(out.begin() + std::ptrdiff_t(q));
        merged = true;
      }
  }
  return out;
}

HilbertFn hilbertOfCones(const std::vector<Cone>& cones) {
  HilbertFn h;
  for (const auto& c : cones) h = h + HilbertFn::monomial(int(order(c.base)), int(c.free.size()));
  return h;
}

}  // namespace delin
