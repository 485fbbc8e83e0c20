"""Errors raised by the Zassenhaus algebra computations."""


class CertificateError(RuntimeError):
    """A structural certificate (torus, toral element, grading) failed to verify."""
