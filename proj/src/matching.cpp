#include "selfdual/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "selfdual/error.hpp"

namespace selfdual {

namespace {

// Port of the classic primal-dual blossom formulation with endpoint
// bookkeeping: edge k has endpoints 2k (its u) and 2k+1 (its v); a blossom
// stores its sub-blossoms in cyclic order starting at the base.
class Blossom {
 public:
  Blossom(std::size_t n, const std::vector<WeightedEdge>& edges)
      : nv_(static_cast<long>(n)), ne_(static_cast<long>(edges.size())), edges_(edges) {}

  std::vector<std::size_t> run();

 private:
  using Idx = long;

  std::int64_t slack(Idx k) const {
    const auto& e = edges_[k];
    return dual_[e.u] + dual_[e.v] - 2 * e.weight;
  }

  static Idx wrap(Idx j, std::size_t n) {
    const Idx m = static_cast<Idx>(n);
    return ((j % m) + m) % m;
  }

  void leaves(Idx b, std::vector<Idx>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (Idx t : childs_[b]) leaves(t, out);
  }
  std::vector<Idx> leaves(Idx b) const {
    std::vector<Idx> out;
    leaves(b, out);
    return out;
  }

  void assign_label(Idx w, int t, Idx p);
  Idx scan_blossom(Idx v, Idx w);
  void add_blossom(Idx base, Idx k);
  void expand_blossom(Idx b, bool endstage);
  void augment_blossom(Idx b, Idx v);
  void augment_matching(Idx k);

  Idx nv_;
  Idx ne_;
  const std::vector<WeightedEdge>& edges_;

  std::vector<Idx> endpoint_;
  std::vector<std::vector<Idx>> neighbend_;
  std::vector<Idx> mate_;
  std::vector<int> label_;
  std::vector<Idx> labelend_;
  std::vector<Idx> inblossom_;
  std::vector<Idx> parent_;
  std::vector<std::vector<Idx>> childs_;
  std::vector<Idx> base_;
  std::vector<std::vector<Idx>> endps_;
  std::vector<Idx> bestedge_;
  std::vector<std::vector<Idx>> bestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<Idx> unused_;
  std::vector<std::int64_t> dual_;
  std::vector<bool> allow_;
  std::vector<Idx> queue_;
};

void Blossom::assign_label(Idx w, int t, Idx p) {
  const Idx b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const Idx base = base_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

Blossom::Idx Blossom::scan_blossom(Idx v, Idx w) {
  std::vector<Idx> path;
  Idx base = -1;
  while (v != -1 || w != -1) {
    Idx b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (Idx b : path) label_[b] = 1;
  return base;
}

void Blossom::add_blossom(Idx base, Idx k) {
  Idx v = static_cast<Idx>(edges_[k].u);
  Idx w = static_cast<Idx>(edges_[k].v);
  const Idx bb = inblossom_[base];
  Idx bv = inblossom_[v];
  Idx bw = inblossom_[w];
  const Idx b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  std::vector<Idx> path;
  std::vector<Idx> endps;
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  childs_[b] = path;
  endps_[b] = endps;
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for (Idx leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<Idx> bestedgeto(2 * nv_, -1);
  for (Idx sub : path) {
    std::vector<std::vector<Idx>> nblists;
    if (!has_bestedges_[sub]) {
      for (Idx leaf : leaves(sub)) {
        std::vector<Idx> list;
        for (Idx p : neighbend_[leaf]) list.push_back(p / 2);
        nblists.push_back(std::move(list));
      }
    } else {
      nblists.push_back(bestedges_[sub]);
    }
    for (const auto& list : nblists) {
      for (Idx kk : list) {
        Idx i = static_cast<Idx>(edges_[kk].u);
        Idx j = static_cast<Idx>(edges_[kk].v);
        if (inblossom_[j] == b) std::swap(i, j);
        const Idx bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = kk;
        }
      }
    }
    bestedges_[sub].clear();
    has_bestedges_[sub] = false;
    bestedge_[sub] = -1;
  }
  bestedges_[b].clear();
  for (Idx kk : bestedgeto) {
    if (kk != -1) bestedges_[b].push_back(kk);
  }
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (Idx kk : bestedges_[b]) {
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }
}

void Blossom::expand_blossom(Idx b, bool endstage) {
  const std::vector<Idx> children = childs_[b];
  for (Idx s : children) {
    parent_[s] = -1;
    if (s < nv_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (Idx leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& ch = childs_[b];
    const auto& ep = endps_[b];
    const std::size_t len = ch.size();
    const Idx entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    Idx j = static_cast<Idx>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    Idx jstep;
    Idx endptrick;
    if (j & 1) {
      j -= static_cast<Idx>(len);
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    Idx p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allow_[ep[wrap(j - endptrick, len)] / 2] = true;
      j += jstep;
      p = ep[wrap(j - endptrick, len)] ^ endptrick;
      allow_[p / 2] = true;
      j += jstep;
    }
    Idx bv = ch[wrap(j, len)];
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (ch[wrap(j, len)] != entrychild) {
      bv = ch[wrap(j, len)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      Idx labelled = -1;
      for (Idx leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          labelled = leaf;
          break;
        }
      }
      if (labelled != -1) {
        label_[labelled] = 0;
        label_[endpoint_[mate_[base_[bv]]]] = 0;
        assign_label(labelled, 2, labelend_[labelled]);
      }
      j += jstep;
    }
  }
  label_[b] = -1;
  labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  bestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void Blossom::augment_blossom(Idx b, Idx v) {
  Idx t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= nv_) augment_blossom(t, v);
  auto& ch = childs_[b];
  auto& ep = endps_[b];
  const std::size_t len = ch.size();
  const Idx i = static_cast<Idx>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  Idx j = i;
  Idx jstep;
  Idx endptrick;
  if (i & 1) {
    j -= static_cast<Idx>(len);
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = ch[wrap(j, len)];
    const Idx p = ep[wrap(j - endptrick, len)] ^ endptrick;
    if (t >= nv_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = ch[wrap(j, len)];
    if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  base_[b] = base_[ch[0]];
}

void Blossom::augment_matching(Idx k) {
  const Idx ends[2][2] = {{static_cast<Idx>(edges_[k].u), 2 * k + 1},
                          {static_cast<Idx>(edges_[k].v), 2 * k}};
  for (const auto& start : ends) {
    Idx s = start[0];
    Idx p = start[1];
    while (true) {
      const Idx bs = inblossom_[s];
      if (bs >= nv_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const Idx t = endpoint_[labelend_[bs]];
      const Idx bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const Idx j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= nv_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<std::size_t> Blossom::run() {
  const std::size_t n = static_cast<std::size_t>(nv_);
  std::vector<std::size_t> result(n, kUnmatched);
  if (nv_ == 0 || ne_ == 0) return result;

  std::int64_t maxweight = 0;
  for (const auto& e : edges_) {
    if (e.u >= n || e.v >= n || e.u == e.v) throw InputError("matching: invalid edge");
    if (e.weight % 2 != 0) throw InputError("matching: weights must be even");
    maxweight = std::max(maxweight, e.weight);
  }
  endpoint_.resize(2 * ne_);
  neighbend_.assign(n, {});
  for (Idx k = 0; k < ne_; ++k) {
    endpoint_[2 * k] = static_cast<Idx>(edges_[k].u);
    endpoint_[2 * k + 1] = static_cast<Idx>(edges_[k].v);
    neighbend_[edges_[k].u].push_back(2 * k + 1);
    neighbend_[edges_[k].v].push_back(2 * k);
  }
  mate_.assign(n, -1);
  label_.assign(2 * n, 0);
  labelend_.assign(2 * n, -1);
  inblossom_.resize(n);
  for (Idx v = 0; v < nv_; ++v) inblossom_[v] = v;
  parent_.assign(2 * n, -1);
  childs_.assign(2 * n, {});
  base_.assign(2 * n, -1);
  for (Idx v = 0; v < nv_; ++v) base_[v] = v;
  endps_.assign(2 * n, {});
  bestedge_.assign(2 * n, -1);
  bestedges_.assign(2 * n, {});
  has_bestedges_.assign(2 * n, false);
  unused_.clear();
  for (Idx b = nv_; b < 2 * nv_; ++b) unused_.push_back(b);
  dual_.assign(2 * n, 0);
  for (Idx v = 0; v < nv_; ++v) dual_[v] = maxweight;
  allow_.assign(ne_, false);

  for (Idx stage = 0; stage < nv_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (Idx b = nv_; b < 2 * nv_; ++b) {
      bestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allow_.begin(), allow_.end(), false);
    queue_.clear();
    for (Idx v = 0; v < nv_; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
    }
    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const Idx v = queue_.back();
        queue_.pop_back();
        for (Idx p : neighbend_[v]) {
          const Idx k = p / 2;
          const Idx w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allow_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allow_[k] = true;
          }
          if (allow_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const Idx base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const Idx b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = 1;
      std::int64_t delta = *std::min_element(dual_.begin(), dual_.begin() + nv_);
      Idx deltaedge = -1;
      Idx deltablossom = -1;
      for (Idx v = 0; v < nv_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const std::int64_t d = slack(bestedge_[v]);
          if (d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (Idx b = 0; b < 2 * nv_; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const std::int64_t d = slack(bestedge_[b]) / 2;
          if (d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (Idx b = nv_; b < 2 * nv_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && dual_[b] < delta) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }

      for (Idx v = 0; v < nv_; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == 1) {
          dual_[v] -= delta;
        } else if (l == 2) {
          dual_[v] += delta;
        }
      }
      for (Idx b = nv_; b < 2 * nv_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) {
            dual_[b] += delta;
          } else if (label_[b] == 2) {
            dual_[b] -= delta;
          }
        }
      }

      if (deltatype == 1) break;
      if (deltatype == 2) {
        allow_[deltaedge] = true;
        Idx i = static_cast<Idx>(edges_[deltaedge].u);
        const Idx j = static_cast<Idx>(edges_[deltaedge].v);
        if (label_[inblossom_[i]] == 0) i = j;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allow_[deltaedge] = true;
        queue_.push_back(static_cast<Idx>(edges_[deltaedge].u));
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (Idx b = nv_; b < 2 * nv_; ++b) {
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
        expand_blossom(b, true);
      }
    }
  }
  for (Idx v = 0; v < nv_; ++v) {
    if (mate_[v] >= 0) result[v] = static_cast<std::size_t>(endpoint_[mate_[v]]);
  }
  return result;
}

}  // namespace

std::vector<std::size_t> max_weight_matching(std::size_t n, const std::vector<WeightedEdge>& edges) {
  return Blossom(n, edges).run();
}

std::vector<std::size_t> max_weight_matching(std::size_t n, const std::vector<RealEdge>& edges) {
  double maxabs = 0.0;
  for (const auto& e : edges) {
    if (!std::isfinite(e.weight)) throw InputError("matching: non-finite weight");
    maxabs = std::max(maxabs, std::abs(e.weight));
  }
  std::vector<WeightedEdge> scaled;
  scaled.reserve(edges.size());
  if (maxabs == 0.0) return std::vector<std::size_t>(n, kUnmatched);
  const double scale = std::ldexp(1.0, 49) / maxabs;
  for (const auto& e : edges) {
    const auto half = static_cast<std::int64_t>(std::llround(e.weight * scale));
    scaled.push_back({e.u, e.v, 2 * half});
  }
  return max_weight_matching(n, scaled);
}

}  // namespace selfdual
