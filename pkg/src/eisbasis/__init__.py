"""Exact Eisenstein series bases on congruence subgroups of SL2(Z)."""
from .cyclotomic import CycNum, cyclotomic_polynomial, zeta_pow
from .special_values import DomainError, bernoulli_polynomial, partial_zeta_scaled
from .modgroup import (CongruenceSubgroup, ParameterError, gamma, gamma0, gamma1, gammaNt,
                       larcher, generated, parse_group)
from .qseries import QExpansion
from .eisenstein import (e_series, g_series, spectral_basis, unnormalized_basis,
                         constant_term_at_cusp, dimension_formula)
from .hecke import LabelCombination, diamond, tp_label, tp_qexp
from .characters import DirichletCharacter, enumerate_characters, nebentypus_basis

__version__ = "0.1.0"
