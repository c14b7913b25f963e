#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's orbit, window or covering code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Dist = std::function<double(int, int)>;

inline double arc(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

// Orbit by repeated application: out[i] = f_i o ... o f_1 (x).
inline std::vector<int> orbit(const std::function<int(int, int)>& step, int x, int n) {
  std::vector<int> out{x};
  for (int i = 1; i <= n; ++i) out.push_back(step(i, out.back()));
  return out;
}

// Maximum clique by Bron-Kerbosch with pivoting on an adjacency matrix.
inline std::size_t max_clique(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::size_t best = 0;
  std::function<void(std::vector<int>&, std::vector<int>, std::vector<int>)> expand =
      [&](std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
        if (p.empty() && x.empty()) {
          best = std::max(best, r.size());
          return;
        }
        if (r.size() + p.size() <= best) return;
        int pivot = p.empty() ? x.front() : p.front();
        std::size_t pivot_deg = 0;
        for (int u : p) {
          std::size_t deg = 0;
          for (int v : p) deg += adj[u][v];
          if (deg >= pivot_deg) {
            pivot_deg = deg;
            pivot = u;
          }
        }
        std::vector<int> candidates;
        for (int v : p)
          if (!adj[pivot][v]) candidates.push_back(v);
        for (int v : candidates) {
          std::vector<int> p2, x2;
          for (int u : p)
            if (adj[v][u]) p2.push_back(u);
          for (int u : x)
            if (adj[v][u]) x2.push_back(u);
          r.push_back(v);
          expand(r, p2, x2);
          r.pop_back();
          p.erase(std::find(p.begin(), p.end(), v));
          x.push_back(v);
        }
      };
  std::vector<int> r, p(n), x;
  for (int i = 0; i < n; ++i) p[i] = i;
  expand(r, p, x);
  return best;
}

// Smallest k such that some k points cover everything, where covers[a][b]
// says a covers b. Exhaustive over subsets in increasing size.
inline std::size_t min_cover(const std::vector<std::vector<bool>>& covers, std::size_t max_k) {
  const std::size_t n = covers.size();
  for (std::size_t k = 1; k <= max_k; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      bool all = true;
      for (std::size_t b = 0; b < n && all; ++b) {
        bool hit = false;
        for (std::size_t a : idx) hit = hit || covers[a][b];
        all = hit;
      }
      if (all) return k;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return max_k + 1;
}

// Words of length depth over m symbols in lexicographic order, first symbol
// most significant.
inline std::vector<int> word(int index, int m, int depth) {
  std::vector<int> w(depth);
  for (int j = depth - 1; j >= 0; --j) {
    w[j] = index % m;
    index /= m;
  }
  return w;
}

inline double word_distance(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != b[j]) return std::ldexp(1.0, -static_cast<int>(j));
  return 0.0;
}

inline std::vector<int> shift(const std::vector<int>& w) {
  std::vector<int> out(w.begin() + 1, w.end());
  out.push_back(0);
  return out;
}

// (e^a + e^b)^n as a log: the transfer matrix of a first-symbol potential on
// the full 2-shift is the rank-one matrix with every row (e^a, e^b).
inline double transfer_log_partition(double a, double b, int n) {
  double v[2] = {1.0, 1.0};
  for (int i = 0; i < n; ++i) {
    const double s = v[0] * std::exp(a) + v[1] * std::exp(b);
    v[0] = v[1] = s;
  }
  return std::log(v[0]);
}

}  // namespace oracle
