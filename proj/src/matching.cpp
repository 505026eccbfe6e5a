#include "dsched/matching.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <vector>

namespace dsched {

namespace {

// Weighted blossom matching, ported from van Rantwijk's reference formulation
// (also the basis of NetworkX max_weight_matching). Vertex duals start at the
// maximum edge weight; each stage grows alternating trees from free vertices,
// shrinking odd cycles into blossoms and adjusting duals until an augmenting
// path appears or the duals prove optimality.
class BlossomMatcher {
 public:
  BlossomMatcher(int n, const std::vector<WeightedEdge>& input) : nvertex(n) {
    for (const auto& e : input) {
      if (e.a == e.b) continue;  // self-loops never belong to a matching
      edges.push_back(e);
    }
    nedge = static_cast<int>(edges.size());
    maxweight = 0;
    for (const auto& e : edges) maxweight = std::max(maxweight, e.w);

    endpoint.resize(2 * nedge);
    for (int k = 0; k < nedge; ++k) {
      endpoint[2 * k] = edges[k].a;
      endpoint[2 * k + 1] = edges[k].b;
    }
    neighbend.assign(nvertex, {});
    for (int k = 0; k < nedge; ++k) {
      neighbend[edges[k].a].push_back(2 * k + 1);
      neighbend[edges[k].b].push_back(2 * k);
    }

    mate.assign(nvertex, -1);
    label.assign(2 * nvertex, 0);
    labelend.assign(2 * nvertex, -1);
    inblossom.resize(nvertex);
    for (int v = 0; v < nvertex; ++v) inblossom[v] = v;
    blossomparent.assign(2 * nvertex, -1);
    blossomchilds.assign(2 * nvertex, {});
    blossombase.resize(2 * nvertex);
    for (int v = 0; v < nvertex; ++v) blossombase[v] = v;
    for (int b = nvertex; b < 2 * nvertex; ++b) blossombase[b] = -1;
    blossomendps.assign(2 * nvertex, {});
    bestedge.assign(2 * nvertex, -1);
    blossombestedges.assign(2 * nvertex, {});
    hasbestedges.assign(2 * nvertex, false);
    for (int b = nvertex; b < 2 * nvertex; ++b) unusedblossoms.push_back(b);
    dualvar.assign(2 * nvertex, 0.0);
    for (int v = 0; v < nvertex; ++v) dualvar[v] = maxweight;
    allowedge.assign(nedge, false);
  }

  std::vector<int> run() {
    for (int t = 0; t < nvertex; ++t) {
      std::fill(label.begin(), label.end(), 0);
      std::fill(bestedge.begin(), bestedge.end(), -1);
      for (int b = nvertex; b < 2 * nvertex; ++b) {
        hasbestedges[b] = false;
        blossombestedges[b].clear();
      }
      std::fill(allowedge.begin(), allowedge.end(), false);
      queue.clear();

      for (int v = 0; v < nvertex; ++v)
        if (mate[v] == -1 && label[inblossom[v]] == 0) assignLabel(v, 1, -1);

      bool augmented = false;
      while (true) {
        while (!queue.empty() && !augmented) {
          int v = queue.back();
          queue.pop_back();
          for (int p : neighbend[v]) {
            int k = p / 2;
            int w = endpoint[p];
            if (inblossom[v] == inblossom[w]) continue;
            double kslack = 0;
            if (!allowedge[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge[k] = true;
            }
            if (allowedge[k]) {
              if (label[inblossom[w]] == 0) {
                assignLabel(w, 2, p ^ 1);
              } else if (label[inblossom[w]] == 1) {
                int base = scanBlossom(v, w);
                if (base >= 0) {
                  addBlossom(base, k);
                } else {
                  augmentMatching(k);
                  augmented = true;
                  break;
                }
              } else if (label[w] == 0) {
                label[w] = 2;
                labelend[w] = p ^ 1;
              }
            } else if (label[inblossom[w]] == 1) {
              int b = inblossom[v];
              if (bestedge[b] == -1 || kslack < slack(bestedge[b])) bestedge[b] = k;
            } else if (label[w] == 0) {
              if (bestedge[w] == -1 || kslack < slack(bestedge[w])) bestedge[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = 1;
        double delta = std::numeric_limits<double>::infinity();
        for (int v = 0; v < nvertex; ++v) delta = std::min(delta, dualvar[v]);
        int deltaedge = -1, deltablossom = -1;
        for (int v = 0; v < nvertex; ++v) {
          if (label[inblossom[v]] == 0 && bestedge[v] != -1) {
            double d = slack(bestedge[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge[v];
            }
          }
        }
        for (int b = 0; b < 2 * nvertex; ++b) {
          if (blossomparent[b] == -1 && label[b] == 1 && bestedge[b] != -1) {
            double d = slack(bestedge[b]) / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge[b];
            }
          }
        }
        for (int b = nvertex; b < 2 * nvertex; ++b) {
          if (blossombase[b] >= 0 && blossomparent[b] == -1 && label[b] == 2 &&
              dualvar[b] < delta) {
            delta = dualvar[b];
            deltatype = 4;
            deltablossom = b;
          }
        }

        for (int v = 0; v < nvertex; ++v) {
          if (label[inblossom[v]] == 1)
            dualvar[v] -= delta;
          else if (label[inblossom[v]] == 2)
            dualvar[v] += delta;
        }
        for (int b = nvertex; b < 2 * nvertex; ++b) {
          if (blossombase[b] >= 0 && blossomparent[b] == -1) {
            if (label[b] == 1)
              dualvar[b] += delta;
            else if (label[b] == 2)
              dualvar[b] -= delta;
          }
        }

        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge[deltaedge] = true;
          int i = edges[deltaedge].a;
          if (label[inblossom[i]] == 0) i = edges[deltaedge].b;
          queue.push_back(i);
        } else if (deltatype == 3) {
          allowedge[deltaedge] = true;
          queue.push_back(edges[deltaedge].a);
        } else {
          expandBlossom(deltablossom, false);
        }
      }
      if (!augmented) break;

      for (int b = nvertex; b < 2 * nvertex; ++b)
        if (blossomparent[b] == -1 && blossombase[b] >= 0 && label[b] == 1 &&
            dualvar[b] == 0)
          expandBlossom(b, true);
    }

    std::vector<int> result(nvertex, -1);
    for (int v = 0; v < nvertex; ++v)
      if (mate[v] >= 0) result[v] = endpoint[mate[v]];
    return result;
  }

 private:
  int nvertex, nedge = 0;
  double maxweight;
  std::vector<WeightedEdge> edges;
  std::vector<int> endpoint;
  std::vector<std::vector<int>> neighbend;
  std::vector<int> mate, label, labelend, inblossom, blossomparent, blossombase, bestedge;
  std::vector<std::vector<int>> blossomchilds, blossomendps, blossombestedges;
  std::vector<bool> hasbestedges;
  std::vector<int> unusedblossoms;
  std::vector<double> dualvar;
  std::vector<bool> allowedge;
  std::vector<int> queue;

  double slack(int k) const {
    return dualvar[edges[k].a] + dualvar[edges[k].b] - 2 * edges[k].w;
  }

  void blossomLeaves(int b, std::vector<int>& out) const {
    if (b < nvertex) {
      out.push_back(b);
    } else {
      for (int t : blossomchilds[b]) blossomLeaves(t, out);
    }
  }

  void assignLabel(int w, int t, int p) {
    int b = inblossom[w];
    label[w] = label[b] = t;
    labelend[w] = labelend[b] = p;
    bestedge[w] = bestedge[b] = -1;
    if (t == 1) {
      std::vector<int> leaves;
      blossomLeaves(b, leaves);
      for (int v : leaves) queue.push_back(v);
    } else if (t == 2) {
      int base = blossombase[b];
      assignLabel(endpoint[mate[base]], 1, mate[base] ^ 1);
    }
  }

  int scanBlossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom[v];
      if (label[b] & 4) {
        base = blossombase[b];
        break;
      }
      path.push_back(b);
      label[b] = 5;
      if (labelend[b] == -1) {
        v = -1;
      } else {
        v = endpoint[labelend[b]];
        b = inblossom[v];
        v = endpoint[labelend[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label[b] = 1;
    return base;
  }

  void addBlossom(int base, int k) {
    int v = edges[k].a, w = edges[k].b;
    int bb = inblossom[base], bv = inblossom[v], bw = inblossom[w];
    int b = unusedblossoms.back();
    unusedblossoms.pop_back();
    blossombase[b] = base;
    blossomparent[b] = -1;
    blossomparent[bb] = b;
    std::vector<int>& path = blossomchilds[b];
    std::vector<int>& endps = blossomendps[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend[bv]);
      v = endpoint[labelend[bv]];
      bv = inblossom[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend[bw] ^ 1);
      w = endpoint[labelend[bw]];
      bw = inblossom[w];
    }
    label[b] = 1;
    labelend[b] = labelend[bb];
    dualvar[b] = 0;
    std::vector<int> leaves;
    blossomLeaves(b, leaves);
    for (int lv : leaves) {
      if (label[inblossom[lv]] == 2) queue.push_back(lv);
      inblossom[lv] = b;
    }

    std::vector<int> bestedgeto(2 * nvertex, -1);
    for (int child : path) {
      std::vector<std::vector<int>> nblists;
      if (!hasbestedges[child]) {
        std::vector<int> childleaves;
        blossomLeaves(child, childleaves);
        for (int lv : childleaves) {
          std::vector<int> ks;
          for (int p : neighbend[lv]) ks.push_back(p / 2);
          nblists.push_back(std::move(ks));
        }
      } else {
        nblists.push_back(blossombestedges[child]);
      }
      for (const auto& nblist : nblists) {
        for (int ek : nblist) {
          int i = edges[ek].a, j = edges[ek].b;
          if (inblossom[j] == b) std::swap(i, j);
          int bj = inblossom[j];
          if (bj != b && label[bj] == 1 &&
              (bestedgeto[bj] == -1 || slack(ek) < slack(bestedgeto[bj])))
            bestedgeto[bj] = ek;
        }
      }
      hasbestedges[child] = false;
      blossombestedges[child].clear();
      bestedge[child] = -1;
    }
    blossombestedges[b].clear();
    for (int ek : bestedgeto)
      if (ek != -1) blossombestedges[b].push_back(ek);
    hasbestedges[b] = true;
    bestedge[b] = -1;
    for (int ek : blossombestedges[b])
      if (bestedge[b] == -1 || slack(ek) < slack(bestedge[b])) bestedge[b] = ek;
  }

  void expandBlossom(int b, bool endstage) {
    for (int s : blossomchilds[b]) {
      blossomparent[s] = -1;
      if (s < nvertex) {
        inblossom[s] = s;
      } else if (endstage && dualvar[s] == 0) {
        expandBlossom(s, endstage);
      } else {
        std::vector<int> leaves;
        blossomLeaves(s, leaves);
        for (int v : leaves) inblossom[v] = s;
      }
    }
    if (!endstage && label[b] == 2) {
      int entrychild = inblossom[endpoint[labelend[b] ^ 1]];
      int nchilds = static_cast<int>(blossomchilds[b].size());
      int j = 0;
      while (blossomchilds[b][j] != entrychild) ++j;
      int jstep, endptrick;
      if (j & 1) {
        j -= nchilds;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      auto child_at = [&](int idx) {
        return blossomchilds[b][(idx % nchilds + nchilds) % nchilds];
      };
      auto endp_at = [&](int idx) {
        return blossomendps[b][(idx % nchilds + nchilds) % nchilds];
      };
      int p = labelend[b];
      while (j != 0) {
        label[endpoint[p ^ 1]] = 0;
        label[endpoint[endp_at(j - endptrick) ^ endptrick ^ 1]] = 0;
        assignLabel(endpoint[p ^ 1], 2, p);
        allowedge[endp_at(j - endptrick) / 2] = true;
        j += jstep;
        p = endp_at(j - endptrick) ^ endptrick;
        allowedge[p / 2] = true;
        j += jstep;
      }
      int bv = child_at(j);
      label[endpoint[p ^ 1]] = label[bv] = 2;
      labelend[endpoint[p ^ 1]] = labelend[bv] = p;
      bestedge[bv] = -1;
      j += jstep;
      while (child_at(j) != entrychild) {
        bv = child_at(j);
        if (label[bv] == 1) {
          j += jstep;
          continue;
        }
        std::vector<int> leaves;
        blossomLeaves(bv, leaves);
        int labeled = -1;
        for (int v : leaves)
          if (label[v] != 0) {
            labeled = v;
            break;
          }
        if (labeled >= 0) {
          label[labeled] = 0;
          label[endpoint[mate[blossombase[bv]]]] = 0;
          assignLabel(labeled, 2, labelend[labeled]);
        }
        j += jstep;
      }
    }
    label[b] = 0;
    labelend[b] = -1;
    blossomchilds[b].clear();
    blossomendps[b].clear();
    blossombase[b] = -1;
    hasbestedges[b] = false;
    blossombestedges[b].clear();
    bestedge[b] = -1;
    unusedblossoms.push_back(b);
  }

  void augmentBlossom(int b, int v) {
    int t = v;
    while (blossomparent[t] != b) t = blossomparent[t];
    if (t >= nvertex) augmentBlossom(t, v);
    int nchilds = static_cast<int>(blossomchilds[b].size());
    int i = 0;
    while (blossomchilds[b][i] != t) ++i;
    int j = i, jstep, endptrick;
    if (i & 1) {
      j -= nchilds;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto child_at = [&](int idx) {
      return blossomchilds[b][(idx % nchilds + nchilds) % nchilds];
    };
    auto endp_at = [&](int idx) {
      return blossomendps[b][(idx % nchilds + nchilds) % nchilds];
    };
    while (j != 0) {
      j += jstep;
      t = child_at(j);
      int p = endp_at(j - endptrick) ^ endptrick;
      if (t >= nvertex) augmentBlossom(t, endpoint[p]);
      j += jstep;
      t = child_at(j);
      if (t >= nvertex) augmentBlossom(t, endpoint[p ^ 1]);
      mate[endpoint[p]] = p ^ 1;
      mate[endpoint[p ^ 1]] = p;
    }
    std::rotate(blossomchilds[b].begin(), blossomchilds[b].begin() + i,
                blossomchilds[b].end());
    std::rotate(blossomendps[b].begin(), blossomendps[b].begin() + i,
                blossomendps[b].end());
    blossombase[b] = blossombase[blossomchilds[b][0]];
  }

  void augmentMatching(int k) {
    for (int side = 0; side < 2; ++side) {
      int s = side == 0 ? edges[k].a : edges[k].b;
      int p = side == 0 ? 2 * k + 1 : 2 * k;
      while (true) {
        int bs = inblossom[s];
        if (bs >= nvertex) augmentBlossom(bs, s);
        mate[s] = p;
        if (labelend[bs] == -1) break;
        int t = endpoint[labelend[bs]];
        int bt = inblossom[t];
        s = endpoint[labelend[bt]];
        int j = endpoint[labelend[bt] ^ 1];
        if (bt >= nvertex) augmentBlossom(bt, j);
        mate[j] = labelend[bt];
        p = labelend[bt] ^ 1;
      }
    }
  }
};

constexpr double kBig = 1e30;

}  // namespace

std::vector<int> max_weight_matching(int n_vertices, const std::vector<WeightedEdge>& edges) {
  std::vector<WeightedEdge> positive;
  for (const auto& e : edges)
    if (e.w > 0) positive.push_back(e);
  if (positive.empty()) return std::vector<int>(n_vertices, -1);
  BlossomMatcher matcher(n_vertices, positive);
  return matcher.run();
}

std::vector<int> max_weight_bipartite(int n_left, int n_right,
                                      const std::vector<WeightedEdge>& edges) {
  // Shortest augmenting path assignment on cost = -weight, with one zero-cost
  // dummy column per row so any node may stay unmatched.
  const int n = n_left;
  const int m = n_right + n_left;
  std::vector<std::vector<double>> cost(n + 1, std::vector<double>(m + 1, kBig));
  for (const auto& e : edges) {
    if (e.w <= 0) continue;
    double c = -e.w;
    if (c < cost[e.a + 1][e.b + 1]) cost[e.a + 1][e.b + 1] = c;
  }
  for (int i = 1; i <= n; ++i) cost[i][n_right + i] = 0.0;

  std::vector<double> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kBig);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kBig;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(n_left, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    int i = p[j] - 1;
    if (j <= n_right && cost[p[j]][j] < kBig / 2) match[i] = j - 1;
  }
  return match;
}

}  // namespace dsched
