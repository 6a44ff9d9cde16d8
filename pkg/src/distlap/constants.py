"""Shared irrational constants.

Everything here is derived from a single square root of 2 so that the same
double-precision value flows through every module; nothing is typed in as a
decimal literal.
"""

import math

SQRT2 = math.sqrt(2.0)

# coefficient of the cross term in the balanced distance form
ONE_PLUS_2SQRT2 = 1.0 + 2.0 * SQRT2

SQRT2_PLUS_HALF = SQRT2 + 0.5
SQRT2_MINUS_HALF = SQRT2 - 0.5

# universal spectral-gap floor (9 - 4*sqrt(2)) / 7 ~ 0.4776
GAP_FLOOR = (9.0 - 4.0 * SQRT2) / 7.0

# floor for Cayley graphs on abelian groups / translation-invariant metrics
CAYLEY_FLOOR = 2.0 / 3.0

# stronger floor when the group order is odd
ODD_ORDER_FLOOR = 0.718
