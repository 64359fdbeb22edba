#pragma once
//
// Exact sheaf cohomology of line bundles on smooth complete toric varieties.
//
// For a T-divisor D = sum a_rho D_rho and a character u, the degree-u piece
// of H^i(X, O(D)) is the reduced cohomology H~^{i-1} of the subcomplex of the
// fan spanned by the rays with <u, v_rho> < -a_rho. Only finitely many u give
// a nonzero contribution; they all lie in the bounding box of the vertices of
// the hyperplane arrangement {<u, v_rho> = -a_rho}, which we inflate by one
// and check for stray contributions on its boundary.
//

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>
#include <unistd.h>

#include "excol/error.hpp"
#include "excol/fan.hpp"
#include "excol/lattice.hpp"
#include "excol/types.hpp"

namespace excol {

/// Induced subcomplex of the fan on a set of active rays.
struct SupportComplex {
  std::vector<std::size_t> active_rays;
  std::vector<std::vector<std::size_t>> facets;  // max cones restricted to active rays
};

inline SupportComplex support_complex(const Fan& fan, std::uint64_t active_mask) {
  SupportComplex cx;
  for (std::size_t r = 0; r < fan.num_rays(); ++r)
    if ((active_mask >> r) & 1) cx.active_rays.push_back(r);
  std::set<std::vector<std::size_t>> facets;
  for (const auto& c : fan.max_cones()) {
    std::vector<std::size_t> f;
    for (auto i : c)
      if ((active_mask >> i) & 1) f.push_back(i);
    facets.insert(std::move(f));
  }
  cx.facets.assign(facets.begin(), facets.end());
  return cx;
}

/// Ranks of H~^{-1}..H~^{top_dim} over the rationals. The empty face is
/// always present, so the complex with no vertices has H~^{-1} = Q.
inline std::vector<std::int64_t> reduced_cohomology_ranks(const SupportComplex& cx, int top_dim) {
  // Faces as bitmasks over vertex ids, grouped by dimension (size - 1).
  std::set<std::uint64_t> all{0};
  for (const auto& f : cx.facets) {
    std::uint64_t fm = 0;
    for (auto v : f) fm |= std::uint64_t{1} << v;
    for (std::uint64_t sub = fm;; sub = (sub - 1) & fm) {
      all.insert(sub);
      if (sub == 0) break;
    }
  }
  int max_dim = -1;
  for (auto f : all) max_dim = std::max(max_dim, std::popcount(f) - 1);
  const int levels = std::max(max_dim, top_dim) + 2;  // dims -1 .. max
  std::vector<std::vector<std::uint64_t>> by_dim(static_cast<std::size_t>(levels + 1));
  for (auto f : all) by_dim[static_cast<std::size_t>(std::popcount(f))].push_back(f);

  // coboundary_rank[d+1] = rank of delta: C^d -> C^{d+1}, d >= -1.
  std::vector<std::size_t> cob_rank(static_cast<std::size_t>(levels + 1), 0);
  for (std::size_t sz = 0; sz + 1 < by_dim.size(); ++sz) {
    const auto& lo = by_dim[sz];
    const auto& hi = by_dim[sz + 1];
    if (lo.empty() || hi.empty()) continue;
    IntMatrix m(hi.size(), lo.size());
    std::unordered_map<std::uint64_t, std::size_t> col;
    for (std::size_t c = 0; c < lo.size(); ++c) col[lo[c]] = c;
    for (std::size_t r = 0; r < hi.size(); ++r) {
      std::uint64_t t = hi[r];
      int pos = 0;
      for (std::uint64_t rest = t; rest; rest &= rest - 1, ++pos) {
        std::uint64_t v = rest & -rest;
        m(r, col.at(t & ~v)) = (pos % 2 == 0) ? 1 : -1;
      }
    }
    cob_rank[sz] = rational_rank(std::move(m));
  }

  std::vector<std::int64_t> out;
  for (int d = -1; d <= top_dim; ++d) {
    const auto sz = static_cast<std::size_t>(d + 1);
    const auto dim_c = static_cast<std::int64_t>(sz < by_dim.size() ? by_dim[sz].size() : 0);
    const auto out_rank = static_cast<std::int64_t>(sz < cob_rank.size() ? cob_rank[sz] : 0);
    const auto in_rank = static_cast<std::int64_t>(sz >= 1 ? cob_rank[sz - 1] : 0);
    out.push_back(dim_c - out_rank - in_rank);
  }
  return out;
}

namespace detail {

/// Per-fan data reused across classes: the support-complex contribution of
/// every active-ray mask and the linear systems locating arrangement vertices.
class FanContext {
 public:
  explicit FanContext(const Fan& fan) : n_(fan.dim()), nrays_(fan.num_rays()) {
    if (nrays_ > 20) throw Error("too many rays for the cohomology oracle");
    for (const auto& r : fan.rays()) rays_.push_back(r.vec);

    const std::size_t masks = std::size_t{1} << nrays_;
    table_.resize(masks);
    for (std::size_t m = 0; m < masks; ++m) {
      auto ranks = reduced_cohomology_ranks(support_complex(fan, m), static_cast<int>(n_) - 1);
      // h^i gets rank H~^{i-1}, i.e. ranks[i].
      for (std::size_t i = 0; i <= n_; ++i)
        if (ranks[i] != 0) table_[m].push_back({i, ranks[i]});
    }

    // Vertex systems: n-subsets S with invertible V_S.
    std::vector<std::size_t> pick;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (pick.size() == n_) {
        IntMatrix vt(n_, n_);  // rows are the rays: V_S^T
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) vt(i, j) = rays_[pick[i]][j];
        BigInt det = determinant(vt);
        if (det == 0) return;
        IntMatrix adj = n_ == 0 ? IntMatrix() : adjugate(vt);
        VertexSystem vs{pick, std::vector<std::int64_t>(n_ * n_), det.convert_to<std::int64_t>()};
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) vs.adj[i * n_ + j] = adj(i, j).convert_to<std::int64_t>();
        systems_.push_back(std::move(vs));
        return;
      }
      for (std::size_t r = start; r < nrays_; ++r) {
        pick.push_back(r);
        self(self, r + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
  }

  std::size_t dim() const { return n_; }

  HVector compute(const IntVec& a) const {
    if (a.size() != nrays_) throw std::invalid_argument("divisor length does not match fan");
    // Bounding box of arrangement vertices.
    std::vector<std::int64_t> lo(n_), hi(n_);
    bool first = true;
    for (const auto& vs : systems_) {
      for (std::size_t i = 0; i < n_; ++i) {
        // u = adj(V_S^T) * (-a_S) / det
        BigInt num = 0;
        for (std::size_t j = 0; j < n_; ++j) num -= BigInt(vs.adj[i * n_ + j]) * a[vs.rays[j]];
        const std::int64_t f = floor_div(num, vs.det).convert_to<std::int64_t>();
        const std::int64_t c = ceil_div(num, vs.det).convert_to<std::int64_t>();
        if (first || f < lo[i]) lo[i] = f;
        if (first || c > hi[i]) hi[i] = c;
      }
      first = false;
    }
    double volume = 1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      lo[i] -= 1;
      hi[i] += 1;
      volume *= static_cast<double>(hi[i] - lo[i] + 1);
    }
    if (volume > 2e9) throw Error("cohomology search region too large");

    const std::size_t masks = table_.size();
    std::vector<std::uint64_t> inner(masks, 0), boundary(masks, 0);
    std::vector<std::int64_t> u(lo);
    // val[r] = <u, v_r> + a_r; ray r is active when val[r] < 0.
    std::vector<std::int64_t> val(nrays_);
    for (std::size_t r = 0; r < nrays_; ++r) {
      val[r] = a[r];
      for (std::size_t d = 0; d < n_; ++d) val[r] += u[d] * rays_[r][d];
    }
    if (n_ == 0) {
      ++inner[0];
    } else {
      // Odometer over the box; the innermost coordinate runs in a tight loop.
      const std::size_t last = n_ - 1;
      std::vector<std::int64_t> step(nrays_), v(nrays_);
      for (std::size_t r = 0; r < nrays_; ++r) step[r] = rays_[r][last];
      for (;;) {
        bool outer_boundary = false;
        for (std::size_t d = 0; d < last; ++d)
          if (u[d] == lo[d] || u[d] == hi[d]) outer_boundary = true;
        v = val;
        for (std::int64_t x = lo[last]; x <= hi[last]; ++x) {
          std::size_t m = 0;
          for (std::size_t r = 0; r < nrays_; ++r) m |= static_cast<std::size_t>(v[r] < 0) << r;
          if (outer_boundary || x == lo[last] || x == hi[last])
            ++boundary[m];
          else
            ++inner[m];
          for (std::size_t r = 0; r < nrays_; ++r) v[r] += step[r];
        }
        bool advanced = false;
        for (std::size_t d = last; d-- > 0;) {
          if (u[d] < hi[d]) {
            ++u[d];
            for (std::size_t r = 0; r < nrays_; ++r) val[r] += rays_[r][d];
            advanced = true;
            break;
          }
          for (std::size_t r = 0; r < nrays_; ++r) val[r] -= (u[d] - lo[d]) * rays_[r][d];
          u[d] = lo[d];
        }
        if (!advanced) break;
      }
    }

    HVector h(n_ + 1);
    for (std::size_t m = 0; m < masks; ++m) {
      if (table_[m].empty()) continue;
      if (boundary[m] != 0)
        throw UnboundedContribution("support complex with nonzero cohomology on the search-box boundary");
      for (const auto& [deg, rank] : table_[m]) h[deg] += static_cast<std::int64_t>(inner[m]) * rank;
    }
    return h;
  }

 private:
  struct VertexSystem {
    std::vector<std::size_t> rays;
    std::vector<std::int64_t> adj;  // n x n, row-major
    std::int64_t det;
  };

  std::size_t n_;
  std::size_t nrays_;
  std::vector<IntVec> rays_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> table_;
  std::vector<VertexSystem> systems_;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

}  // namespace detail

/// h^i(X, O(D)) for an explicit T-divisor.
inline HVector cohomology_of_divisor(const Fan& fan, const IntVec& coeffs) {
  return detail::FanContext(fan).compute(coeffs);
}

inline HVector cohomology_dims(const Fan& fan, const PicClass& cls) {
  return cohomology_of_divisor(fan, tdivisor_lift(fan, cls));
}

/// chi(a, b) = sum (-1)^i dim Ext^i(O(a), O(b)) = chi(O(b - a)).
inline std::int64_t euler_pairing(const Fan& fan, const PicClass& a, const PicClass& b) {
  return cohomology_dims(fan, b - a).euler();
}

/// Directory-backed store of HVectors, one JSON file per key. Writers go
/// through a rename, so concurrent writers resolve last-writer-wins.
class DiskCache {
 public:
  explicit DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  static std::filesystem::path default_dir() {
    if (const char* env = std::getenv("EXCOL_CACHE_DIR"); env && *env) return env;
    return ".excol-cache";
  }

  static std::string key_for(const Fan& fan, const PicClass& cls) {
    std::ostringstream os;
    os << fan.key() << '|';
    for (auto c : cls.coords) os << c << ',';
    return detail::sha256_hex(os.str());
  }

  std::optional<HVector> load(const std::string& key) const {
    std::ifstream in(dir_ / (key + ".json"));
    if (!in) return std::nullopt;
    try {
      auto j = nlohmann::json::parse(in);
      HVector h;
      h.dims = j.at("h").get<std::vector<std::int64_t>>();
      return h;
    } catch (const std::exception&) {
      return std::nullopt;  // torn or foreign file: recompute
    }
  }

  void store(const std::string& key, const HVector& h) const {
    nlohmann::json j;
    j["h"] = h.dims;
    static std::atomic<std::uint64_t> counter{0};
    auto tmp = dir_ / (key + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
    {
      std::ofstream out(tmp);
      out << j.dump();
    }
    std::error_code ec;
    std::filesystem::rename(tmp, dir_ / (key + ".json"), ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// Memoizing front end to the oracle, safe for concurrent callers.
class CohomologyOracle {
 public:
  CohomologyOracle() = default;
  explicit CohomologyOracle(std::optional<DiskCache> disk) : disk_(std::move(disk)) {}

  HVector dims(const Fan& fan, const PicClass& cls) {
    if (cls.basis != fan.basis()) throw std::invalid_argument("class does not belong to this fan");
    auto [ctx, id] = context(fan);
    std::string memo_key = std::to_string(id) + ':';
    for (auto c : cls.coords) memo_key += std::to_string(c) + ',';
    {
      std::lock_guard lock(mu_);
      if (auto it = memo_.find(memo_key); it != memo_.end()) {
        ++hits_;
        return it->second;
      }
    }
    std::optional<std::string> disk_key;
    std::optional<HVector> h;
    if (disk_) {
      disk_key = DiskCache::key_for(fan, cls);
      h = disk_->load(*disk_key);
    }
    if (!h) {
      h = ctx->compute(tdivisor_lift(fan, cls));
      if (disk_) disk_->store(*disk_key, *h);
    }
    std::lock_guard lock(mu_);
    ++misses_;
    memo_.emplace(memo_key, *h);
    return *h;
  }

  std::int64_t euler_pairing(const Fan& fan, const PicClass& a, const PicClass& b) { return dims(fan, b - a).euler(); }

  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }
  std::size_t misses() const {
    std::lock_guard lock(mu_);
    return misses_;
  }

 private:
  std::pair<std::shared_ptr<const detail::FanContext>, std::size_t> context(const Fan& fan) {
    {
      std::lock_guard lock(mu_);
      if (auto it = contexts_.find(fan.key()); it != contexts_.end()) return it->second;
    }
    auto ctx = std::make_shared<const detail::FanContext>(fan);
    std::lock_guard lock(mu_);
    auto [it, inserted] = contexts_.emplace(fan.key(), std::make_pair(ctx, contexts_.size()));
    return it->second;
  }

  mutable std::mutex mu_;
  std::optional<DiskCache> disk_;
  std::unordered_map<std::string, std::pair<std::shared_ptr<const detail::FanContext>, std::size_t>> contexts_;
  std::unordered_map<std::string, HVector> memo_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace excol
