from kirbylab import linalg
from kirbylab.farray import stack


def flat(H, x):
    return x.vec if hasattr(x, "vec") else x.arr.reshape(H.dim * H.dim)


def same_span(H, A, B) -> bool:
    """Exact span equality of two lists of elements (or tensors)."""
    if len(A) != len(B):
        return False
    if not A:
        return True
    ra = linalg.rank(stack([flat(H, x) for x in A], 0))
    rab = linalg.rank(stack([flat(H, x) for x in list(A) + list(B)], 0))
    return ra == rab == len(A)
