"""Reference Adam recurrences with bias correction, three steps."""
import math

lr, b1, b2, eps = 1e-3, 0.9, 0.999, 1e-8
theta = [0.5, -1.2, 3.0]
grads = [[1.0, -0.5, 0.25], [0.3, 0.0, -2.0], [-1.5, 0.7, 0.1]]
m = [0.0] * 3
v = [0.0] * 3
for t, g in enumerate(grads, start=1):
    for i in range(3):
        m[i] = b1 * m[i] + (1 - b1) * g[i]
        v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i]
        mhat = m[i] / (1 - b1 ** t)
        vhat = v[i] / (1 - b2 ** t)
        theta[i] -= lr * mhat / (math.sqrt(vhat) + eps)
    print("step", t, [repr(x) for x in theta])

# single step with g = 1 from a fresh state
print("single", repr(0.5 - lr * 1.0 / (1.0 + eps)))
