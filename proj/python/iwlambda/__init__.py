"""Iwasawa lambda-invariants of twisted Kubota-Leopoldt p-adic L-functions."""

from ._iwlambda import *  # noqa: F401,F403
from ._iwlambda import DirichletChar, TwistedChar, lambda_crosscheck


def lam(label, i, p, **params):
    """Cross-checked lambda of theta * omega^i at p, theta given by its label."""
    from ._iwlambda import LambdaParams

    return lambda_crosscheck(TwistedChar(DirichletChar(label), i, p), LambdaParams(**params))
