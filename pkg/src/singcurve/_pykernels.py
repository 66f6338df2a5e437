"""Pure-Python kernels; reference behaviour for the compiled twins in _ckernels."""


def conv_trunc(a, b, n):
    """Integer convolution of dense coefficient lists, keeping indices < n."""
    la, lb = len(a), len(b)
    size = min(n, la + lb - 1) if la and lb else 0
    if size <= 0:
        return []
    out = [0] * size
    for i in range(min(la, size)):
        ai = a[i]
        if not ai:
            continue
        stop = min(lb, size - i)
        for j in range(stop):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


