import numpy as np
# rows: households; hh type incidence + person-attribute counts
inc = np.array([
 # A  B  male female
 [1, 0, 1, 1],
 [1, 0, 0, 1],
 [0, 1, 2, 1],
 [0, 1, 1, 0]], float)
t = np.array([30, 20, 40, 45], float)
w = np.ones(4)
for it in range(10000):
    for c in range(4):
        tot = inc[:, c] @ w
        f = t[c] / tot
        w = np.where(inc[:, c] > 0, w * f, w)
    dev = np.max(np.abs(inc.T @ w - t) / t)
    if dev < 1e-12: break
np.set_printoptions(precision=17); print(it, repr(w), inc.T @ w)
