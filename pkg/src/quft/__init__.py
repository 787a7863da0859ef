"""Two-sided quaternion Fourier transform toolkit.

Quaternion algebra, sampled fields on centered grids, the discrete
two-sided transform (a literal-sum oracle plus an equivalent fast path),
closed-form signal families, and the uncertainty-principle functionals
that separate the supercritical, critical, and subcritical decay regimes.
"""

from .quaternion import (I, J, K, ONE, Quaternion, conj, inverse, modulus, mul,
                         qconj, qmodulus, qmul)
from .field import (FieldFormatError, Grid2D, QField, load_field, lp_norm,
                    read_field, save_field, weighted_sup, write_field)
from .transform import (ScalingReport, SpectrumField, check_scaling, iqft,
                        load_spectrum, qft_direct, qft_fast, read_spectrum,
                        save_spectrum, write_spectrum)
from .signals import (AnalyticSignal, EnvelopeFit, Gaussian, HermiteGauss,
                      PolyGaussian, SpectrumEnvelope, eval_point, evaluate,
                      exact_qft, format_signal, hermite_phi, parse_signal,
                      sample, sample_spectrum, verify_envelope)
from .uncertainty import (CRITICAL, SUBCRITICAL, SUPERCRITICAL, Classification,
                          CowlingPriceResult, HardyResult, MiyachiResult,
                          UPParams, UPReport, classify, cowling_price_check,
                          evaluate_report, hardy_check, miyachi_functional,
                          miyachi_nested, nested_verdict, report_from_text,
                          report_to_text, witness_subcritical)

__version__ = "0.1.0"
