import numpy as np
def dyadic_ladder(k0=14, k1=24):
    ks = np.arange(k0, k1+1); return ks, 2.0**ks
def geometric_ladder(x0, ratio, n:int): return x0*ratio**np.arange(n)
def rung_below(x, ratio=4.0, n:int=4): return x/ratio**np.arange(1, n+1)
