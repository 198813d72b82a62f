"""Median lattice rule for high-dimensional integration.

A randomized quadrature that draws a random prime and a random generating
vector, repeats an odd number of times, and returns the componentwise median
of the lattice-rule estimates, with no tuning to the integrand's smoothness
or weights.  Ships with the weighted-Korobov error machinery that verifies it.
"""

from .errors import (AccuracyError, ConfigError, ContractViolation, DomainError,
                     EvaluationError, InsufficientDataError, QmcError, SizeError,
                     WeightError)
from .experiments import (ExperimentConfig, RateRow, RateTable, default_n_grid,
                          estimate_expected_error, fit_rate, run_convergence,
                          write_outputs)
from .integrands import (TestFunctionSpec, factor_mean_check, factor_function,
                         g_a_eval, g_a_mean, g_a_values, make_integrand)
from .korobov import (GeneralWeights, KorobovParams, ProductWeights,
                      TrigPolynomial, WeightScheme, det_error_bound, m_d_bound,
                      parse_weights, product_to_general, r_weight,
                      random_vector_error_bound, v_d, zeta, zeta_tail_upper)
from .lattice import (Integrand, LatticeRule, apply_rule, dual_indicator,
                      lattice_nodes, node_residues, trig_integrand)
from .median_rule import (HChoice, MedianRuleConfig, MedianRunTrace,
                          ReplicateResult, complex_median, integrate_median,
                          integrate_median_tent, replicate_count,
                          run_median_rule, tent, tent_transform)
from .primes import (PrimePool, SeededRng, derive_seed, is_prime,
                     primes_in_range, sample_generator, sample_prime,
                     sieve_upto)
from .quadrature import adaptive_simpson, graded_breakpoints, tanh_sinh
from .summation import compensated_complex_mean, compensated_sum
from .wce import (WceBruteForceResult, bernoulli_even, median_wce_bound,
                  wce_bruteforce, wce_kernel)

__version__ = "0.1.0"
