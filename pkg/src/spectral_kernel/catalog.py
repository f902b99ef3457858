"""Built-in example sessions."""

EXPONENTIAL = """\
# L = D^3 + 6 sech^2(x) D and a Goodearl basis of its centralizer
field exponential
L = D^3 + 6/cosh(x)^2*D
G1 = D^4 + (8/cosh(x)^2 - 4/3)*D^2 - 8*sinh(x)/cosh(x)^3*D
G2 = D^5 + 10/cosh(x)^2*D^3 - 20*sinh(x)/cosh(x)^3*D^2 + (16/9 + 80/3/cosh(x)^2 - 20/cosh(x)^4)*D
basis L: G1, G2
"""

# Invariants (-g2, -g3): wpd^2 = 4 wp^3 + g2 wp + g3, the curve on which
# these generators commute with L.
ELLIPTIC = """\
field elliptic(-g2, -g3)
L = D^4 - 12*wp*D^2 + 1
G1 = D^5 - 15*wp*D^3 - 15/2*wpd*D^2 - 3*g2*D
G2 = D^6 - 18*wp*D^4 - 18*wpd*D^3 - (36*wp^2 + 9*g2)*D^2
G3 = D^7 - 21*wp*D^5 - 63/2*wpd*D^4 - (126*wp^2 + 21*g2)*D^3 - 63*wp*wpd*D^2 - 27*g3*D
basis L: G1, G2, G3
"""

ELLIPTIC_SUB = ELLIPTIC.replace("basis L: G1, G2, G3", "basis L: G2")

CATALOG = {
    "exponential": EXPONENTIAL,
    "elliptic": ELLIPTIC,
    "elliptic-sub": ELLIPTIC_SUB,
}
