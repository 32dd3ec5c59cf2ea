#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frsplit/splitring.hpp"

namespace frsplit {

/// Deliberate defects used as negative controls.
enum class Corruption { None, StructureConstant, PsiCoefficient, EtaScale };

Corruption parse_corruption(const std::string& s);
std::string corruption_name(Corruption c);

struct SuiteOptions {
    uint64_t seed = 1;
    /// Bound on the combined degree of monomial tuples in the Hopf checks.
    int hopf_degree = 6;
    /// Random words per Frobenius identity.
    int word_cases = 1000;
    /// Random cases for the sampled suites.
    int sample_cases = 500;
};

/// Everything needed to rebuild a context from scratch.
struct RunSpec {
    RootSystem rs;
    int p = 3;
    Truncation trunc;
    int grading_degree = 6;
    Corruption corruption = Corruption::None;
    SuiteOptions options;
};

/// All suite names in their canonical order.
const std::vector<std::string>& suite_names();
/// True when the suite needs the grading, St and psi.
bool suite_needs_psi(const std::string& name);

/// Algebra-only context; applies a structure-constant corruption.
Context make_run_context(const RunSpec& spec);
/// Completes the context and applies psi or eta corruptions once.
void ensure_complete(Context& ctx, const RunSpec& spec);

/// Runs one suite; exceptions inside a case are recorded as failures of that case.
VerifyReport run_suite(Context& ctx, const RunSpec& spec, const std::string& name);
/// Runs the named suites in order; jobs > 1 spreads them over workers that each own a context.
std::vector<VerifyReport> run_suites(const RunSpec& spec, const std::vector<std::string>& names, int jobs);

/// The same root system with one structure constant shifted by 1, kept antisymmetric.
RootSystem corrupt_structure_constant(RootSystem rs);
void corrupt_psi(Context& ctx);
void corrupt_eta(Context& ctx);

}  // namespace frsplit
