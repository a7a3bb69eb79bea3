// Copyright 2026 The hspc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hspc/var_hsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "hspc/errors.hpp"
#include "hspc/hsp_exact.hpp"
#include "hspc/parallel.hpp"

namespace hspc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-300;

double log_clamped(double p) { return std::log(std::clamp(p, kTiny, 1.0)); }

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Log-probability weight of a block covering wires [a, b] under the Bernoulli product.
std::vector<std::vector<double>> block_weights(std::span<const double> gamma, int n) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n, kNegInf));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double s = 0.0;
      for (int k = a; k <= b; ++k) {
        for (int j = k + 1; j < n; ++j) {
          const double g = gamma[theta_index(n, k, j)];
          s += j <= b ? log_clamped(g) : log_clamped(1.0 - g);
        }
      }
      w[a][b] = s;
    }
  }
  return w;
}

std::vector<int> blocks_to_partition(const std::vector<int>& ends) {
  std::vector<int> part;
  int start = 0;
  for (int e : ends) {
    part.push_back(e - start + 1);
    start = e + 1;
  }
  return part;
}

void check_params(const RealParams& p) {
  for (double v : p.gamma_qft)
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("gamma_qft entries must lie in [0, 1]");
  for (double v : p.gamma_perm)
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("gamma_perm entries must lie in [0, 1]");
  if (p.gamma_perm.size() != p.gamma_qft.size()) throw ShapeError("gamma_qft and gamma_perm lengths differ");
}

}  // namespace

// ---------------------------------------------------------------------------

RealParams RealParams::constant(int n, double qft, double perm) {
  return RealParams{std::vector<double>(theta_count(n), qft), std::vector<double>(theta_count(n), perm)};
}

RealParams RealParams::exact(const GroupStructure& g) {
  auto q = qft_theta_for(g.type());
  auto p = perm_theta_for(g.perm());
  return RealParams{{q.begin(), q.end()}, {p.begin(), p.end()}};
}

int RealParams::n() const {
  int n = 1;
  while (theta_count(n) < gamma_qft.size()) ++n;
  if (theta_count(n) != gamma_qft.size()) throw ShapeError("gamma_qft length is not n(n-1)/2");
  return n;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0) || !(fd_step > 0) || mc_samples < 1 || max_iters < 1 || !(grad_tol > 0) ||
      resample_limit < 1 || patience < 1 || max_step < 0 || !(pretrain_lr > 0) || !(pretrain_fd_step > 0) || pretrain_iters < 1 ||
      pretrain_restarts < 0)
    throw ParameterError("training configuration values must be positive");
  if (fd_step >= 0.5) throw ParameterError("fd_step must be below 0.5");
}

GroupStructure BinaryConfig::group() const {
  auto g = decode_group_from_params(theta_qft, theta_perm);
  if (!g) throw InvariantError("binary configuration is not a valid block pattern");
  return *g;
}

std::string BinaryConfig::key() const {
  std::string k;
  k.reserve(theta_qft.size() + theta_perm.size() + 1);
  for (auto v : theta_qft) k += static_cast<char>('0' + v);
  k += '|';
  for (auto v : theta_perm) k += static_cast<char>('0' + v);
  return k;
}

std::uint64_t BinaryConfig::fingerprint() const { return fnv1a(key()); }

int BinaryConfig::n() const {
  int n = 1;
  while (theta_count(n) < theta_qft.size()) ++n;
  return n;
}

std::vector<std::pair<GroupType, double>> valid_pattern_distribution(std::span<const double> gamma_qft, int n) {
  if (gamma_qft.size() != theta_count(n)) throw ShapeError("gamma_qft length must be n(n-1)/2");
  auto w = block_weights(gamma_qft, n);
  std::vector<std::pair<GroupType, double>> out;
  std::vector<double> logs;
  double total = kNegInf;
  for (auto& type : GroupType::all(n)) {
    double lp = 0.0;
    for (int t = 0; t < type.blocks(); ++t) lp += w[type.offset(t)][type.offset(t) + type.width(t) - 1];
    logs.push_back(lp);
    total = log_add(total, lp);
    out.emplace_back(type, 0.0);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].second = std::exp(logs[i] - total);
  return out;
}

BinaryConfig sample_binary_config(const RealParams& params, Rng& rng, int resample_limit) {
  check_params(params);
  if (resample_limit < 1) throw ParameterError("resample_limit must be at least 1");
  const int n = params.n();
  BinaryConfig cfg;
  cfg.theta_qft.resize(params.gamma_qft.size());
  bool ok = false;
  for (cfg.draws = 1; cfg.draws <= resample_limit; ++cfg.draws) {
    for (std::size_t i = 0; i < cfg.theta_qft.size(); ++i) cfg.theta_qft[i] = rng.uniform() < params.gamma_qft[i];
    if (group_type_from_theta(cfg.theta_qft, n)) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    // Exact draw from the Bernoulli product conditioned on validity:
    // z[a] is the log-mass of all block decompositions of wires a..n-1.
    cfg.draws = resample_limit;
    cfg.fallback = true;
    auto w = block_weights(params.gamma_qft, n);
    std::vector<double> z(n + 1, kNegInf);
    z[n] = 0.0;
    for (int a = n - 1; a >= 0; --a)
      for (int b = a; b < n; ++b) z[a] = log_add(z[a], w[a][b] + z[b + 1]);
    std::vector<int> ends;
    for (int a = 0; a < n;) {
      const double u = rng.uniform();
      double acc = 0.0;
      int pick = n - 1;
      for (int b = a; b < n; ++b) {
        acc += std::exp(w[a][b] + z[b + 1] - z[a]);
        if (u < acc) {
          pick = b;
          break;
        }
      }
      ends.push_back(pick);
      a = pick + 1;
    }
    cfg.theta_qft = qft_theta_for(GroupType(blocks_to_partition(ends)));
  }
  cfg.theta_perm.resize(params.gamma_perm.size());
  for (std::size_t i = 0; i < cfg.theta_perm.size(); ++i) cfg.theta_perm[i] = rng.uniform() < params.gamma_perm[i];
  return cfg;
}

BinaryConfig nearest_valid_config(const RealParams& params) {
  check_params(params);
  const int n = params.n();
  auto w = block_weights(params.gamma_qft, n);
  // best[a] = highest log-probability decomposition of wires a..n-1.
  std::vector<double> best(n + 1, kNegInf);
  std::vector<int> choice(n, n - 1);
  best[n] = 0.0;
  for (int a = n - 1; a >= 0; --a) {
    for (int b = a; b < n; ++b) {
      const double v = w[a][b] + best[b + 1];
      if (v > best[a]) {
        best[a] = v;
        choice[a] = b;
      }
    }
  }
  std::vector<int> ends;
  for (int a = 0; a < n; a = choice[a] + 1) ends.push_back(choice[a]);
  BinaryConfig cfg;
  cfg.theta_qft = qft_theta_for(GroupType(blocks_to_partition(ends)));
  for (double v : params.gamma_perm) cfg.theta_perm.push_back(v >= 0.5);
  return cfg;
}

// ---------------------------------------------------------------------------

std::vector<double> continuous_generator(std::span<const double> S, const GroupStructure& g) {
  if (S.size() != static_cast<std::size_t>(g.n())) throw ShapeError("S must have n entries");
  const auto& type = g.type();
  const auto& map = g.perm().mapping();
  std::vector<double> s(type.blocks(), 0.0);
  for (int t = 0; t < type.blocks(); ++t) {
    const int lo = type.offset(t), hi = lo + type.width(t);
    for (int p = lo; p < hi; ++p) s[t] += S[map[p]] * std::ldexp(1.0, hi - 1 - p);
  }
  return s;
}

std::vector<double> continuous_generator(std::span<const double> S, const GroupType& type) {
  return continuous_generator(S, GroupStructure(type));
}

Element round_generator(std::span<const double> S, const GroupStructure& g) {
  auto s = continuous_generator(S, g);
  std::vector<std::uint64_t> parts(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double hi = std::ldexp(1.0, g.type().width(t)) - 1.0;
    parts[t] = static_cast<std::uint64_t>(std::clamp(std::nearbyint(s[t]), 0.0, hi));
  }
  return g.from_components(parts);
}

double congruence_residual(const GroupStructure& g, Element j, std::span<const double> blocks) {
  const auto& type = g.type();
  if (blocks.size() != static_cast<std::size_t>(type.blocks())) throw ShapeError("one continuous value per block");
  const auto jc = g.components(j);
  const double M = static_cast<double>(type.modulus());
  double r = 0.0;
  for (int t = 0; t < type.blocks(); ++t)
    r += static_cast<double>(jc[t]) * blocks[t] * (M / std::ldexp(1.0, type.width(t)));
  r = std::fmod(r, M);
  if (r < 0) r += M;
  const double folded = std::min(r, M - r);
  // Elementary groups: distance of the parity sum to the nearest even integer.
  return type.is_elementary() ? folded : folded / M;
}

double pretrain_cost(std::span<const double> dist, std::span<const double> S, const GroupStructure& g) {
  if (dist.size() != g.order()) throw ShapeError("distribution must cover all 2^n outcomes");
  double total = 0.0;
  for (double p : dist) total += p;
  if (!(total > 0.0)) throw ShapeError("empty distribution");
  const auto s = continuous_generator(S, g);
  double c = 0.0;
  for (Element j = 0; j < dist.size(); ++j)
    if (dist[j] > 0.0) c += dist[j] * congruence_residual(g, j, s);
  for (double v : S) {
    const double sn = std::sin(std::numbers::pi * v);
    c += sn * sn;
  }
  return c;
}

double pretrain_cost(std::span<const double> dist, std::span<const double> S, const GroupType& type) {
  return pretrain_cost(dist, S, GroupStructure(type));
}

PretrainResult pretrain(std::span<const double> dist, const GroupStructure& g, std::span<const double> S0,
                        const TrainConfig& config, Rng& rng, bool require_nontrivial) {
  const int n = g.n();
  if (S0.size() != static_cast<std::size_t>(n)) throw ShapeError("S must have n entries");
  // Outcomes with non-negligible probability impose congruences.
  std::vector<Element> support;
  std::vector<double> sparse(dist.size(), 0.0);
  for (Element j = 0; j < dist.size(); ++j) {
    if (dist[j] > 1e-12) {
      support.push_back(j);
      sparse[j] = dist[j];
    }
  }
  auto consistent = [&](Element s) {
    for (Element j : support)
      if (!g.character_trivial(j, s)) return false;
    return true;
  };
  auto violation = [&](Element s) {
    double v = 0.0;
    for (Element j : support)
      if (!g.character_trivial(j, s)) v += sparse[j];
    return v;
  };
  // Same value as pretrain_cost(sparse, S, g), with the character
  // coefficients of each support outcome precomputed.
  const auto& type = g.type();
  const int q = type.blocks();
  const double M = static_cast<double>(type.modulus());
  std::vector<double> coef(support.size() * q);
  for (std::size_t a = 0; a < support.size(); ++a) {
    const auto jc = g.components(support[a]);
    for (int t = 0; t < q; ++t) coef[a * q + t] = static_cast<double>(jc[t]) * (M / std::ldexp(1.0, type.width(t)));
  }
  const double scale = type.is_elementary() ? 1.0 : 1.0 / M;
  auto ce = [&](std::span<const double> S) {
    const auto blocks = continuous_generator(S, g);
    double c = 0.0;
    for (std::size_t a = 0; a < support.size(); ++a) {
      double r = 0.0;
      for (int t = 0; t < q; ++t) r += coef[a * q + t] * blocks[t];
      r = std::fmod(r, M);
      if (r < 0) r += M;
      c += sparse[support[a]] * std::min(r, M - r) * scale;
    }
    for (double v : S) {
      const double sn = std::sin(std::numbers::pi * v);
      c += sn * sn;
    }
    return c;
  };
  // Among consistent elements, one of maximal order whose cyclic subgroup
  // contains s (tau-smallest on ties).  Every consistent element lies in the
  // same kernel, so this only enlarges the encoded subgroup.
  auto promote = [&](Element s) {
    auto order_of = [&](Element t) {
      std::uint64_t ord = 1;
      const auto c = g.components(t);
      for (int b = 0; b < q; ++b) {
        const std::uint64_t mod = std::uint64_t{1} << type.width(b);
        ord = std::max(ord, mod / std::gcd(c[b], mod));
      }
      return ord;
    };
    std::vector<std::pair<std::uint64_t, Element>> cand;
    for (Element t = 1; t < g.order(); ++t)
      if (consistent(t)) cand.push_back({order_of(t), t});
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [ord, t] : cand) {
      if (ord < order_of(s)) break;
      Element x = 0;
      for (std::uint64_t k = 0; k < ord; ++k, x = g.op(x, t))
        if (x == s) return t;
    }
    return s;
  };
  auto random_start = [&] {
    std::vector<double> S(n);
    for (auto& v : S) v = rng.uniform();
    return S;
  };

  // When the support admits no nonzero solution the descent cannot succeed;
  // use the nonzero generator violating the least probability mass.
  const bool feasible = [&] {
    for (Element s = 1; s < g.order(); ++s)
      if (consistent(s)) return true;
    return false;
  }();
  if (!feasible) {
    PretrainResult r;
    r.S.assign(S0.begin(), S0.end());
    if (!require_nontrivial) {
      r.generator = 0;
      r.consistent = true;
      r.cost = ce(r.S);
      return r;
    }
    double best_v = std::numeric_limits<double>::infinity();
    for (Element s = 1; s < g.order(); ++s) {
      const double v = violation(s);
      if (v < best_v) {
        best_v = v;
        r.generator = s;
      }
    }
    r.cost = ce(r.S);
    return r;
  }

  std::vector<PretrainResult> tried;
  for (int attempt = 0; attempt <= config.pretrain_restarts; ++attempt) {
    PretrainResult r;
    r.restarts = attempt;
    if (attempt == 0) {
      r.S.assign(S0.begin(), S0.end());
    } else {
      r.S = random_start();
    }
    for (;; ++r.iterations) {
      r.generator = round_generator(r.S, g);
      if ((r.generator != 0 || !require_nontrivial) && consistent(r.generator)) {
        r.consistent = true;
        break;
      }
      if (r.iterations >= config.pretrain_iters) break;
      auto grad = finite_diff_gradient(ce, r.S, config.pretrain_fd_step);
      double norm = 0.0;
      for (double d : grad) norm += d * d;
      if (std::sqrt(norm) < config.grad_tol) break;
      for (int i = 0; i < n; ++i) r.S[i] = std::clamp(r.S[i] - config.pretrain_lr * grad[i], 0.0, 1.0);
    }
    r.cost = ce(r.S);
    if (r.consistent) {
      r.generator = promote(r.generator);
      return r;
    }
    tried.push_back(std::move(r));
  }

  if (!require_nontrivial) {
    PretrainResult r = tried.front();
    r.generator = promote(0);
    r.consistent = true;
    return r;
  }
  // No consistent nonzero generator: keep the nonzero candidate violating the
  // least probability mass, forcing one switch on if every attempt rounded to 0.
  PretrainResult* best = nullptr;
  double best_v = std::numeric_limits<double>::infinity();
  for (auto& r : tried) {
    if (r.generator == 0) continue;
    const double v = violation(r.generator);
    if (v < best_v || (v == best_v && r.generator < best->generator)) {
      best_v = v;
      best = &r;
    }
  }
  if (!best) {
    best = &tried.front();
    const auto top = std::max_element(best->S.begin(), best->S.end()) - best->S.begin();
    best->S[top] = 1.0;
    best->generator = round_generator(best->S, g);
    best->cost = ce(best->S);
  }
  return *best;
}

// ---------------------------------------------------------------------------

EncodeResult encode_with_config(const Oracle& f, const BinaryConfig& cfg, std::span<const double> S,
                                const TrainConfig& config, Rng& rng, bool require_nontrivial) {
  const auto g = cfg.group();
  if (g.n() != f.n) throw ShapeError("configuration does not match the oracle index width");
  const auto dist = exact_output_distribution(f, QftParams::from_theta(cfg.theta_qft, f.n),
                                              PermParams::from_theta(cfg.theta_perm));
  EncodeResult res;
  res.config = cfg;
  res.pretrain = pretrain(dist, g, S, config, rng, require_nontrivial);
  res.message = make_message(g, res.pretrain.generator, f.m, f.table);
  res.message.theta_perm = cfg.theta_perm;
  res.value_queries = res.message.coset_values.size();
  res.converged = res.pretrain.consistent;
  return res;
}

EncodeResult encode(const Oracle& f, const RealParams& params, std::span<const double> S, const TrainConfig& config,
                    Rng& rng, bool require_nontrivial) {
  auto cfg = sample_binary_config(params, rng, config.resample_limit);
  return encode_with_config(f, cfg, S, config, rng, require_nontrivial);
}

double reconstruction_cost(std::span<const std::uint64_t> original, std::span<const std::uint64_t> reconstructed) {
  if (original.size() != reconstructed.size()) throw ShapeError("sequences must have equal length");
  double c = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double d = static_cast<double>(original[i]) - static_cast<double>(reconstructed[i]);
    c += d * d;
  }
  return c;
}

double expected_cost(const Oracle& f, const RealParams& params, std::span<const double> S, const TrainConfig& config,
                     Rng& rng) {
  if (config.mc_samples < 1) throw ParameterError("mc_samples must be at least 1");
  const std::uint64_t base = rng();
  auto costs = parallel_map<double>(config.mc_samples, [&](std::size_t t) {
    Rng r = Rng::stream({base, t});
    auto enc = encode(f, params, S, config, r, true);
    return reconstruction_cost(f.table, decode(enc.message));
  });
  double sum = 0.0;
  for (double c : costs) sum += c;
  return sum / config.mc_samples;
}

std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& fn,
                                         std::span<const double> x, double h, double lo, double hi) {
  if (!(h > 0)) throw ParameterError("finite-difference step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double up = std::min(x[i] + h, hi), dn = std::max(x[i] - h, lo);
    if (up <= dn) continue;
    probe[i] = up;
    const double fu = fn(probe);
    probe[i] = dn;
    const double fd = fn(probe);
    probe[i] = x[i];
    grad[i] = (fu - fd) / (up - dn);
  }
  return grad;
}

// ---------------------------------------------------------------------------

SwitchTrainResult train_switches(int n, const ConfigCostFn& cost, const TrainConfig& config, Rng& rng) {
  config.validate();
  const std::size_t nq = theta_count(n);
  const std::size_t np = config.train_perm ? nq : 0;
  const std::size_t dims = nq + np;

  std::vector<double> x(dims);
  if (config.init) {
    if (config.init->gamma_qft.size() != nq) throw ShapeError("initial gamma has the wrong length");
    check_params(*config.init);
    for (std::size_t i = 0; i < nq; ++i) x[i] = std::asin(std::sqrt(config.init->gamma_qft[i]));
    for (std::size_t i = 0; i < np; ++i) x[nq + i] = std::asin(std::sqrt(config.init->gamma_perm[i]));
  } else {
    for (auto& v : x) v = std::asin(std::sqrt(rng.uniform()));
  }
  auto to_params = [&](const std::vector<double>& gamma) {
    RealParams p{{gamma.begin(), gamma.begin() + nq}, std::vector<double>(nq, 0.0)};
    if (np) std::copy(gamma.begin() + nq, gamma.end(), p.gamma_perm.begin());
    return p;
  };

  std::unordered_map<std::string, double> known;
  auto lookup = [&](const std::vector<BinaryConfig>& cfgs) {
    std::vector<const BinaryConfig*> missing;
    std::map<std::string, std::size_t> slot;
    for (const auto& c : cfgs) {
      auto k = c.key();
      if (!known.count(k) && !slot.count(k)) {
        slot[k] = missing.size();
        missing.push_back(&c);
      }
    }
    auto vals = parallel_map<double>(missing.size(), [&](std::size_t i) { return cost(*missing[i]); });
    for (std::size_t i = 0; i < missing.size(); ++i) known[missing[i]->key()] = vals[i];
  };

  SwitchTrainResult res;
  double best_e = std::numeric_limits<double>::infinity();
  std::vector<double> best_gamma;
  std::optional<BinaryConfig> best_cfg;
  double best_cfg_cost = std::numeric_limits<double>::infinity();
  const std::size_t T = config.mc_samples;

  int it = 0;
  int quiet = 0;
  for (; it < config.max_iters; ++it) {
    std::vector<double> gamma(dims);
    for (std::size_t i = 0; i < dims; ++i) gamma[i] = std::clamp(std::pow(std::sin(x[i]), 2), 0.0, 1.0);
    // Probe set: the base point, then an upper and lower probe per coordinate.
    std::vector<std::vector<double>> points{gamma};
    std::vector<double> width(dims, 0.0);
    for (std::size_t i = 0; i < dims; ++i) {
      auto up = gamma, dn = gamma;
      up[i] = std::min(gamma[i] + config.fd_step, 1.0);
      dn[i] = std::max(gamma[i] - config.fd_step, 0.0);
      width[i] = up[i] - dn[i];
      points.push_back(std::move(up));
      points.push_back(std::move(dn));
    }
    // Every point reuses the same random stream for sample t.
    auto cfgs = parallel_map<BinaryConfig>(points.size() * T, [&](std::size_t idx) {
      Rng r = Rng::stream({config.seed, 0x7a41, static_cast<std::uint64_t>(it), idx % T});
      return sample_binary_config(to_params(points[idx / T]), r, config.resample_limit);
    });
    lookup(cfgs);
    std::vector<double> e(points.size(), 0.0);
    for (std::size_t idx = 0; idx < cfgs.size(); ++idx) {
      const double c = known.at(cfgs[idx].key());
      e[idx / T] += c;
      if (c < best_cfg_cost) {
        best_cfg_cost = c;
        best_cfg = cfgs[idx];
      }
    }
    for (auto& v : e) v /= static_cast<double>(T);

    std::vector<double> grad(dims, 0.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < dims; ++i) {
      if (width[i] > 0) grad[i] = (e[1 + 2 * i] - e[2 + 2 * i]) / width[i] * std::sin(2.0 * x[i]);
      norm += grad[i] * grad[i];
    }
    norm = std::sqrt(norm);
    res.history.push_back({it, e[0], norm});
    if (e[0] < best_e) {
      best_e = e[0];
      best_gamma = gamma;
    }
    // A vanishing estimate at positive cost is often sampling noise: fresh
    // streams on the next iterations must confirm it before stopping.
    quiet = norm < config.grad_tol ? quiet + 1 : 0;
    if (quiet > 0 && (e[0] == 0.0 || quiet >= config.patience)) {
      ++it;
      break;
    }
    double scale = config.learning_rate;
    if (config.max_step > 0 && scale * norm > config.max_step) scale = config.max_step / norm;
    for (std::size_t i = 0; i < dims; ++i) x[i] -= scale * grad[i];
  }

  res.iterations = it;
  res.params = to_params(best_gamma);
  res.initial_cost = res.history.front().expected_cost;
  BinaryConfig rounded = nearest_valid_config(res.params);
  lookup({rounded});
  res.config = rounded;
  res.final_cost = known.at(rounded.key());
  if (best_cfg && best_cfg_cost < res.final_cost) {
    res.config = *best_cfg;
    res.final_cost = best_cfg_cost;
  }
  res.history.push_back({it, res.final_cost, 0.0});
  res.converged = res.final_cost <= 1e-6;
  return res;
}

namespace {

struct HspCost {
  const Oracle& f;
  const TrainConfig& config;
  std::vector<double> S0;

  EncodeResult encode_at(const BinaryConfig& cfg) const {
    Rng r = Rng::stream({config.seed, 0xe4c0de, cfg.fingerprint()});
    return encode_with_config(f, cfg, S0, config, r, true);
  }
  double operator()(const BinaryConfig& cfg) const {
    return reconstruction_cost(f.table, decode(encode_at(cfg).message));
  }
};

}  // namespace

TrainResult train(const Oracle& f, const TrainConfig& config, Rng& rng) {
  config.validate();
  std::vector<double> S0(f.n);
  for (auto& v : S0) v = rng.uniform();
  HspCost hc{f, config, S0};
  auto sw = train_switches(f.n, std::cref(hc), config, rng);
  TrainResult res;
  res.params = sw.params;
  res.message = hc.encode_at(sw.config).message;
  res.history = std::move(sw.history);
  res.final_cost = sw.final_cost;
  res.initial_cost = sw.initial_cost;
  res.iterations = sw.iterations;
  res.converged = sw.converged;
  return res;
}

double evaluate_config(const Oracle& f, const BinaryConfig& cfg, const TrainConfig& config) {
  Rng init = Rng::stream({config.seed, 0x5eed});
  std::vector<double> S0(f.n);
  for (auto& v : S0) v = init.uniform();
  HspCost hc{f, config, S0};
  return hc(cfg);
}

}  // namespace hspc
