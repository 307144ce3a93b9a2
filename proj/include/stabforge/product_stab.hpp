/** @file product_stab.hpp
 *  @brief Product-type stability data on D^b((P^1)^n): admissibility, shifted
 *         exceptional collections, HN by rearrangement, gluing and support
 *         checks, factor recovery and an axiom validator.
 */
#pragma once

#include "stabforge/derived_core.hpp"
#include "stabforge/p1_stab.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stabforge {

struct ProductStab {
  std::vector<StabP1> factors;
  std::optional<int> geo_index;
  /// k_i of each algebraic factor; the geometric slot holds 0.
  std::vector<int> base_ks;
  cplx global_twist{0.0, 0.0};

  int n() const { return static_cast<int>(factors.size()); }
  bool pure_algebraic() const { return !geo_index.has_value(); }
};

bool admissible(const std::vector<StabP1>& factors);

/// Fills geo_index and base_ks. Throws NotAdmissible for two or more geometric
/// factors. With `check_factors` each factor must also satisfy validate();
/// turning it off lets callers build deliberately broken inputs.
ProductStab make_product(std::vector<StabP1> factors, cplx twist = {}, bool check_factors = true);

/// Shift normalizing a phase into (0, 1].
int heart_shift(double phase);

struct ShiftTable {
  int n = 1;
  double base_phase = 0.0;
  std::vector<double> steps;
  std::vector<int> shifts;  // indexed by MultiIndex mask

  double phase(unsigned mask) const;
  int shift(unsigned mask) const { return shifts.at(mask); }
};

/// Shift table for arbitrary steps, without range checks.
ShiftTable shift_table(double phi, const std::vector<double>& steps);

/// Masks of {0,1}^n ordered by weight, ties broken lexicographically.
std::vector<unsigned> linear_order(int n);

struct PureAlgebraic {
  ShiftTable table;
  std::vector<unsigned> order;
  std::vector<Generator> generators;  // L_I[p_I] listed along `order`
  std::vector<double> masses;         // indexed by mask
  std::vector<int> ks;
};

/// Throws InvalidPhaseStep if a step is below 1.
PureAlgebraic build_pure_algebraic(const std::vector<double>& masses, double phi, const std::vector<double>& steps,
                                   std::vector<int> ks = {});

/// Same construction with no step check, for counterexamples.
PureAlgebraic build_pure_algebraic_unchecked(const std::vector<double>& masses, double phi,
                                             const std::vector<double>& steps, std::vector<int> ks = {});

struct ExtWitness {
  std::size_t from = 0;
  std::size_t to = 0;
  int degree = 0;
  std::string text;
};

struct ExtCheck {
  bool ok = true;
  std::optional<ExtWitness> witness;
};

/// No Hom^k between distinct members for k <= 0. `order` lists indices into
/// `gens`; pairs are visited in that order and the first failure is returned.
ExtCheck ext_exceptional_check(const std::vector<Generator>& gens, const std::vector<std::size_t>& order);
ExtCheck ext_exceptional_check(const std::vector<Generator>& gens);

/// Heart generators: stable products shifted so each phase lies in (0, 1].
std::vector<Generator> stable_generators(const ProductStab& ps, Window window = {});
bool is_stable_generator(const ProductStab& ps, const Generator& g);

cplx product_charge(const ProductStab& ps, const KClass& cls);
double product_phase(const ProductStab& ps, const Generator& g);

/// HN parts in decreasing phase. The filtration is an iterated extension of
/// unknown class, so a needed swap of an adjacent inversion requires the
/// matching Ext^1 to vanish; otherwise RearrangementBlocked is thrown.
std::vector<HNPart> hn_product(const ProductStab& ps, const FormalObject& obj);

struct GluingWitness {
  std::string m0;
  std::string m1;
  MultiIndex j0;
  MultiIndex j1;
  int degree = 0;
  int level = 0;
  std::string text;
};

struct GluingReport {
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::optional<GluingWitness> witness;
};

/// Hom^{<=0}(A0 generator, A1 generator) = 0 for the inductive decomposition
/// that adds the algebraic factors one at a time after the geometric one.
GluingReport gluing_vanishing_check(const ProductStab& ps, Window degrees = {-4, 4}, bool include_sky = true);

struct SupportReport {
  double constant = 0.0;
  std::vector<double> factor_constants;
  std::size_t generators_checked = 0;
  double min_ratio = 0.0;  // min |Z(g)| / (C ||g||) over the window
};

double sup_norm(const KClass& cls);

/// Throws SupportViolated with the offending generator.
SupportReport support_constant(const ProductStab& ps, Window window = {});

/// Phases and masses of the unshifted L_I, indexed by mask.
struct StableData {
  int n = 1;
  std::vector<double> phases;
  std::vector<double> masses;
};

StableData stable_data(const PureAlgebraic& pa);
StableData stable_data(const ProductStab& ps);

struct RecoveredFactor {
  double step = 0.0;
  double mass_ratio = 0.0;
};

/// Throws InconsistentData when phases or log-masses are not affine in I.
std::vector<RecoveredFactor> recover_factors(const StableData& data, double tol = 1e-9);

struct AxiomResult {
  std::string id;
  bool pass = true;
  std::size_t checked = 0;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomResult> results;  // sorted by id
  bool all_pass() const;
  const AxiomResult* find(const std::string& id) const;
};

struct VerifyOptions {
  Window window{};
  std::uint64_t seed = 1;
  int random_filtrations = 32;
  int max_length = 5;
  int shift_spread = 2;
  bool parallel = true;
};

AxiomReport verify_axioms(const ProductStab& ps, const VerifyOptions& opts = {});

/// Axiom (iii) kernel on its own: every ordered pair (g, g'[d]) with
/// phase(g) > phase(g'[d]) must have Hom^0 = 0. Returns the first failing
/// pair in index order, or nothing.
struct PairFailure {
  std::size_t i = 0;
  std::size_t j = 0;
  int d = 0;
};
std::optional<PairFailure> hom_vanishing_pairs(const ProductStab& ps, const std::vector<Generator>& gens, int spread,
                                               std::size_t* checked);
std::optional<PairFailure> hom_vanishing_pairs_serial(const ProductStab& ps, const std::vector<Generator>& gens,
                                                      int spread, std::size_t* checked);

}  // namespace stabforge
