"""Lifshitz-theory Casimir free energies, pressures, entropies and sphere-plate gradients."""
from .config import MatsubaraConfig, make_config
from .errors import (AccuracyWarning, CasimirError, ConfigurationError, ConvergenceError, DegenerateInputError,
                     DomainError, IngestionError, RegimeWarning)
from .geometry import (SpherePlate, beta_corrected_gradient, pfa_force, pfa_gradient, roughness_corrected_gradient,
                       sphere_plate_gradient)
from .lifshitz import (CasimirResult, energy_zero_t, force_zero_t, free_energy, matsubara_frequency, pressure,
                       regime_threshold)
from .materials import (ConductivityLaw, Drude, DrudeParams, GeneralizedPlasma, IdealDielectric, IdealMetal,
                        MaterialModel, NonlocalDrude, NonlocalDrudeParams, OscillatorSet, Plasma, RealDielectric,
                        Tabulated, eps_imag_freq, eps_nonlocal_imag_freq, gamma_at_temperature, mu_at_matsubara)
from .reflection import ReflectionPair, fresnel, impedance_reflection, screened_rtm0, zero_freq_coeffs
from .thermo import EntropySample, NernstReport, entropy, nernst_scan, thermal_correction

__version__ = "0.1.0"
