"""Two GRU steps on d=2, d_h=2 with seed-1 parameters, evaluated by hand.

Parameters are drawn in the library's order: W_r, W, W_z (d_h x d), then
U_r, U, U_z (d_h x d_h), each row-major from uniform(-0.1, 0.1).
"""
import math
from mt64 import MT64

D, DH = 2, 2
rng = MT64(1)


def mat(rows, cols):
    return [[rng.uniform(-0.1, 0.1) for _ in range(cols)] for _ in range(rows)]


W_r, W, W_z = mat(DH, D), mat(DH, D), mat(DH, D)
U_r, U, U_z = mat(DH, DH), mat(DH, DH), mat(DH, DH)


def mv(m, v):
    return [sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m))]


def sig(x):
    return 1.0 / (1.0 + math.exp(-x))


def step(x, h):
    r = [sig(a + b) for a, b in zip(mv(W_r, x), mv(U_r, h))]
    c = [math.tanh(a + b) for a, b in zip(mv(W, x), mv(U, [ri * hi for ri, hi in zip(r, h)]))]
    z = [sig(a + b) for a, b in zip(mv(W_z, x), mv(U_z, h))]
    return [zi * hi + (1 - zi) * ci for zi, hi, ci in zip(z, h, c)]


xs = [[0.5, -0.3], [0.2, 0.8]]
h0 = [0.0, 0.0]
h1 = step(xs[0], h0)
h2 = step(xs[1], h1)
print("W_r", [repr(v) for row in W_r for v in row])
print("U_z", [repr(v) for row in U_z for v in row])
print("h1", [repr(v) for v in h1])
print("h2", [repr(v) for v in h2])
