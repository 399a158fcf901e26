// Task runner behind the command-line tool: executes one JobConfig and
// writes its artifacts (TSV tables, DOT graphs, JSON reports) atomically.
#pragma once

#include "qforge/cache.hpp"
#include "qforge/canonical.hpp"
#include "qforge/config.hpp"
#include "qforge/crystal.hpp"

namespace qforge {

inline constexpr const char* kFaultEnvVar = "QFORGE_FAULT";

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct RunReport {
  std::vector<std::string> artifacts;    // files written, relative to out dir
  std::vector<CheckResult> checks;       // verify task only
  bool all_pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string describe(const std::vector<WeightVector>& blocks) {
  std::string s;
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    if (a) s += ",";
    s += blocks[a].str();
  }
  return s;
}

// The fault-injection hook for exercising the failure path of the verify
// task: when enabled, raising actions are corrupted by one power of v.
inline bool fault_e_action() {
  const char* f = std::getenv(kFaultEnvVar);
  return f && std::string(f) == "e_action";
}

inline NormalElement faulted_e(VermaModule& m, int i, const NormalElement& x) {
  NormalElement y = m.act_E(i, x);
  if (fault_e_action())
    for (auto& c : y.coords) c = c * RatFun(LaurentPoly::v(1));
  return y;
}

} // namespace detail

class Runner {
public:
  Runner(JobConfig job, const std::filesystem::path& out_dir, KVStore* cache)
      : job_(std::move(job)), out_(out_dir), cache_(cache) {
    validate_config(job_);
  }

  RunReport run() {
    if (job_.kind == "dims") return run_dims();
    if (job_.kind == "crystal") return run_crystal();
    if (job_.kind == "tensor") return run_tensor();
    if (job_.kind == "cb") return run_cb();
    return run_verify();
  }

private:
  JobConfig job_;
  std::filesystem::path out_;
  KVStore* cache_;

  std::vector<WeightVector> gradings(int n) const {
    return InducedHom::gradings_up_to(n, job_.depth);
  }

  void emit(RunReport& rep, const std::string& name, const std::string& content) {
    detail::write_atomic(out_ / name, content);
    rep.artifacts.push_back(name);
  }

  // --- dims: graded dimensions of U^-, T_lambda, V_lambda ---------------
  RunReport run_dims() {
    CartanDatum d = job_.datum();
    WeightVector lambda = job_.resolve(*job_.weight, d);
    UqMinus u(d, cache_);
    SimpleQuotient sq(u, lambda);
    std::string tsv = "nu\tdim_u_minus\tdim_t\tdim_v\n";
    for (auto& nu : gradings(d.size())) {
      tsv += nu.str() + "\t" + std::to_string(u.dim(nu)) + "\t" +
             std::to_string(sq.t_dim(nu)) + "\t" + std::to_string(sq.dim(nu)) + "\n";
    }
    RunReport rep;
    emit(rep, job_.basename + ".dims.tsv", tsv);
    return rep;
  }

  // --- crystal: generation, DOT and JSON ---------------------------------
  RunReport run_crystal() {
    CartanDatum d = job_.datum();
    std::vector<CrystalFactor> factors;
    for (auto& f : job_.factors)
      factors.push_back({f.verma ? FactorKind::Verma : FactorKind::Simple,
                         job_.resolve(f.weight, d)});
    Crystal c(d, std::move(factors));
    auto g = c.generate(job_.depth);
    RunReport rep;
    emit(rep, job_.basename + ".crystal.dot", export_dot(c, g));
    emit(rep, job_.basename + ".crystal.json", export_json(c, g).dump(2) + "\n");
    return rep;
  }

  // --- tensor: framed graded-dimension comparison ------------------------
  RunReport run_tensor() {
    CartanDatum d = job_.datum();
    UqMinus base(d, cache_);
    UqMinus framed_alg(frame(d), cache_);
    FramedComparison cmp(base, framed_alg, resolve_blocks(d));
    std::string tsv = "span\tnu\tdim\ttensor_dim\tstatus\n";
    for (auto& row : cmp.compare(job_.depth))
      tsv += row.descriptor + "\t" + row.nu.str() + "\t" + std::to_string(row.lhs) + "\t" +
             std::to_string(row.rhs) + "\t" + row.status + "\n";
    RunReport rep;
    emit(rep, job_.basename + ".tensor.tsv", tsv);
    return rep;
  }

  // --- cb: canonical elements as JSON ------------------------------------
  RunReport run_cb() {
    CartanDatum d = job_.datum();
    UqMinus u(d, cache_);
    BasedTensor bt(u, true, job_.resolve(*job_.lambda2, d), job_.resolve(*job_.lambda1, d));
    nlohmann::ordered_json j;
    j["lambda2"] = bt.first_weight().coords();
    j["lambda1"] = bt.second_weight().coords();
    j["depths"] = nlohmann::ordered_json::array();
    for (auto& nu : gradings(d.size())) {
      nlohmann::ordered_json block;
      block["nu"] = nu.coords();
      block["elements"] = nlohmann::ordered_json::array();
      for (auto& c : bt.canonical_basis(nu)) {
        nlohmann::ordered_json el;
        el["leading"] = c.leading;
        auto coords = nlohmann::ordered_json::array();
        for (auto& x : c.coords) coords.push_back(x.str());
        el["coords"] = std::move(coords);
        SignedChecks sc = bt.verify_signed(nu, c.coords);
        el["integral"] = sc.integral;
        el["invariant"] = sc.invariant;
        el["norm"] = sc.norm;
        block["elements"].push_back(std::move(el));
      }
      j["depths"].push_back(std::move(block));
    }
    RunReport rep;
    emit(rep, job_.basename + ".cb.json", j.dump(2) + "\n");
    return rep;
  }

  // --- verify: the named identity suite -----------------------------------
  RunReport run_verify() {
    CartanDatum d = job_.datum();
    CartanDatum fd = frame(d);
    UqMinus base(d, cache_);
    UqMinus framed_alg(fd, cache_);
    std::vector<WeightVector> blocks = resolve_blocks(d);
    RunReport rep;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
      rep.checks.push_back({name, pass, detail});
    };

    // Defining relations hold in the quotient model, base and framed.
    {
      bool ok = true;
      for (auto* u : {&base, &framed_alg})
        for (int i = 0; i < u->vertex_count() && ok; ++i)
          for (int j = 0; j < u->vertex_count() && ok; ++j)
            if (i != j) ok = u->serre_in_radical(i, j);
      add("serre-radical", ok, "all vertex pairs, base and framed");
    }

    // Commutator relation on Verma weight spaces (fault-injection point).
    {
      VermaModule m(base, blocks.back());
      bool ok = true;
      const std::int64_t h = std::min<std::int64_t>(job_.depth, 3);
      for (auto& nu : InducedHom::gradings_up_to(d.size(), h))
        for (int k = 0; k < base.dim(nu) && ok; ++k) {
          NormalElement x = base.zero(nu);
          x.coords[static_cast<std::size_t>(k)] = RatFun(1);
          for (int i = 0; i < d.size() && ok; ++i)
            for (int j = 0; j < d.size() && ok; ++j) {
              NormalElement lhs = detail::faulted_e(m, i, m.act_F(j, x));
              NormalElement rhs = m.act_F(j, detail::faulted_e(m, i, x));
              if (i == j) {
                RatFun c = (m.k_scalar(i, +1, nu) - m.k_scalar(i, -1, nu)) /
                           RatFun(v_minus_vinv());
                for (std::size_t t = 0; t < rhs.coords.size(); ++t)
                  rhs.coords[t] += c * x.coords[t];
              }
              ok = lhs == rhs;
            }
        }
      add("commutator", ok, "E/F commutators on Verma weight spaces");
    }

    // Higher-order vanishing for every block entry.
    {
      bool ok = true;
      for (auto& b : blocks)
        for (int i = 0; i < d.size() && ok; ++i)
          ok = higher_serre_vanishes(framed_alg, d.size(), i, b[i]);
      add("higher-serre", ok, "framed divided-power relations per block");
    }

    // Graded-dimension comparison of the framed spans (throws on violation).
    {
      bool ok = true;
      std::string detail_s;
      try {
        FramedComparison cmp(base, framed_alg, blocks);
        detail_s = std::to_string(cmp.compare(job_.depth).size()) + " rows";
      } catch (const std::exception& e) {
        ok = false;
        detail_s = e.what();
      }
      add("dim-comparison", ok, detail_s);
    }

    // The induced homomorphism exists and kills the submodule.
    {
      bool ok = true;
      const std::int64_t h = std::min<std::int64_t>(job_.depth, 4);
      for (auto& b : blocks) {
        InducedHom phi = framed_induced_hom(base, framed_alg, b);
        ok = ok && phi.well_defined(h) && phi.kills_t(h) &&
             phi.base_equivariant(std::min<std::int64_t>(h, 3));
        if (!ok) break;
      }
      add("induced-hom", ok, "well-defined, equivariant, kills the submodule");
    }

    // Component counts agree with the closed formula.
    {
      bool ok = true;
      for (auto& nu : gradings(d.size())) {
        auto [lhs, rhs] = component_count(base, blocks, nu);
        if (lhs != rhs) {
          ok = false;
          break;
        }
      }
      add("component-count", ok, "crystal counts vs closed formula");
    }

    // Crystal characters against module dimensions.
    {
      bool ok = true;
      for (auto& b : blocks) {
        SimpleQuotient sq(base, b);
        Crystal c(d, {{FactorKind::Simple, b}});
        auto g = c.generate(job_.depth);
        for (auto& nu : gradings(d.size()))
          if (g.count_at(nu) != sq.dim(nu)) ok = false;
      }
      {
        Crystal c(d, {{FactorKind::Verma, WeightVector::zero(d.size())}});
        auto g = c.generate(job_.depth);
        for (auto& nu : gradings(d.size()))
          if (g.count_at(nu) != base.dim(nu)) ok = false;
      }
      add("crystal-characters", ok, "node counts vs module dimensions");
    }

    // Canonical elements for the two-block descriptor.
    if (blocks.size() >= 2) {
      bool ok = true;
      std::string detail_s = "solved with certificates";
      try {
        BasedTensor bt(base, true, blocks[blocks.size() - 1], blocks[blocks.size() - 2]);
        const std::int64_t h = std::min<std::int64_t>(job_.depth, 3);
        for (auto& nu : InducedHom::gradings_up_to(d.size(), h))
          for (auto& c : bt.canonical_basis(nu)) {
            SignedChecks sc = bt.verify_signed(nu, c.coords);
            ok = ok && sc.integral && sc.invariant;
            if (d.size() == 1) ok = ok && sc.norm;
          }
      } catch (const std::exception& e) {
        ok = false;
        detail_s = e.what();
      }
      add("canonical", ok, detail_s);
    }

    std::string tsv = "check\tstatus\tdetail\n";
    for (auto& c : rep.checks)
      tsv += c.name + "\t" + (c.pass ? "pass" : "fail") + "\t" + c.detail + "\n";
    emit(rep, job_.basename + ".verify.tsv", tsv);
    return rep;
  }

  std::vector<WeightVector> resolve_blocks(const CartanDatum& d) const {
    std::vector<WeightVector> out;
    for (auto& b : job_.blocks) out.push_back(job_.resolve(b, d));
    return out;
  }
};

} // namespace qforge
