"""Named constants shared by the arithmetic and bound evaluators.

Each constant is stored once as a 40-digit decimal string; the float and
mpmath forms are derived from that string so the two precisions never drift.
"""

import mpmath

EULER_GAMMA_STR = "0.5772156649015328606065120900824024310422"
LN10_STR = "2.302585092994045684017991454684364207601"
SQRT10_STR = "3.162277660168379331998893544432718533720"
LN2_STR = "0.6931471805599453094172321214581765680755"

EULER_GAMMA = float(EULER_GAMMA_STR)
LN10 = float(LN10_STR)
SQRT10 = float(SQRT10_STR)
LN2 = float(LN2_STR)

# Digits used by every high-precision evaluation.
HP_DPS = 40

#: Threshold exponent: the theorem applies for log log q >= this value.
LOGLOG_THRESHOLD = 9.594
LOGLOG_THRESHOLD_STR = "9.594"

# Explicit constants quoted by the bounds.
THEOREM_CONSTANT = 9.07
COROLLARY_CONSTANT = 12.11
COROLLARY_LOGLOG_CONSTANT = 1.69
LAMBDA2_CONSTANT = 3.3325
APPENDIX_PHI_CONSTANT = 3.0
APPENDIX_DIVISOR_EXPONENT = 1.066
APPENDIX_OMEGA_CONSTANT = 1.45743


def hp(name: str) -> mpmath.mpf:
    """Return a named constant as an mpf at the current mpmath precision."""
    table = {
        "euler_gamma": EULER_GAMMA_STR,
        "ln10": LN10_STR,
        "sqrt10": SQRT10_STR,
        "ln2": LN2_STR,
        "loglog_threshold": LOGLOG_THRESHOLD_STR,
    }
    return mpmath.mpf(table[name])
