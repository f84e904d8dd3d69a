#pragma once

// Brute-force model of the product net for a two-sided full shift, built from
// strings alone. Shared by the graph tests and the acceptance run.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct ToyModel {
  int k, m;
  Q delta;
  std::vector<std::string> words;
  std::vector<std::pair<int, int>> nodes;  // (word, level)
  oracle::DistMatrix dist;

  ToyModel(int k_, int m_, Q delta_) : k(k_), m(m_), delta(delta_) {
    for (const auto& w : oracle::all_binary(2 * k + 1)) words.push_back(w);
    for (int w = 0; w < static_cast<int>(words.size()); ++w)
      for (int l = 0; l < m; ++l) nodes.emplace_back(w, l);
    std::vector<std::tuple<int, int, Q>> edges;
    auto id = [&](int w, int l) { return w * m + l; };
    const int W = static_cast<int>(words.size());
    for (int w = 0; w < W; ++w) {
      for (int l = 0; l + 1 < m; ++l) edges.emplace_back(id(w, l), id(w, l + 1), Q(1, m));
      for (int v = 0; v < W; ++v) {
        if (words[v].substr(0, 2 * k) == words[w].substr(1)) edges.emplace_back(id(w, m - 1), id(v, 0), Q(1, m));
        if (v > w)
          for (int l = 0; l < m; ++l)
            edges.emplace_back(id(w, l), id(v, l), oracle::centred_metric(words[w], words[v]));
      }
    }
    dist = oracle::floyd_warshall(nodes.size(), edges);
  }

  // Cantor distance between centred word a and the shift of centred word b,
  // over the offsets both know.
  Q shifted_metric(const std::string& a, const std::string& b) const {
    // (f b)[j] = b[j+1]; a knows -k..k, f b knows -k-1..k-1
    for (int j = 0; j <= k; ++j)
      for (int o : {j, -j}) {
        if (o < -k || o > k - 1) continue;
        if (a[k + o] != b[k + o + 1]) return Q(1, std::int64_t{1} << j);
      }
    return Q(0);
  }

  bool in_v0(int a, int b) const {
    auto [wa, la] = nodes[a];
    auto [wb, lb] = nodes[b];
    Q s(la, m), t(lb, m);
    bool v1 = oracle::centred_metric(words[wa], words[wb]) < delta && (s > t ? s - t : t - s) < delta;
    bool v2 = shifted_metric(words[wa], words[wb]) < delta && s < delta && t > 1 - delta;
    bool v3 = shifted_metric(words[wb], words[wa]) < delta && t < delta && s > 1 - delta;
    return v1 || v2 || v3;
  }

  Q modulus() const {
    Q worst(0);
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = 0; b < nodes.size(); ++b) {
        Q r = oracle::centred_metric(words[nodes[a].first], words[nodes[b].first]) +
              Q(std::abs(nodes[a].second - nodes[b].second), m);
        if (r < 2 * delta) worst = std::max(worst, *dist[a][b]);
      }
    return worst;
  }
};

}  // namespace oracle
