from soliton_checks.certificate import (
    CertificateReport,
    certificate_floor,
    ellipticity_certificate,
    pairs_from_solution,
    random_gradient_pairs,
)
from soliton_checks.m_matrix import GradientPair, SpectrumReport, m_matrix, m_spectrum, m_times_grad_g
