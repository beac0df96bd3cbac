"""Algebraic coherent states for exactly solvable potentials.

Submodules: ``specfun`` (special functions), ``opalgebra`` (operators on
monomials), ``potentials`` (Morse / SPT / PT bound states), ``coherent``
(coherent-state constructors and closed forms), ``dynamics`` (evolution,
autocorrelation, revivals) and ``cli``.
"""

__version__ = "0.1.0"
