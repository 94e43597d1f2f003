"""Modal classification of maps between finite combinatorial spaces.

Finite reflexive graphs stand in for spaces; their shapes are finitely
presented free groupoids.  The package classifies graph maps against the
components and fundamental-groupoid modalities (modal / connected /
etale / equivalence / fibration), factors maps through both associated
factorization systems, and carries the supporting theory: Stallings
automata for subgroups of free groups, finite groupoids with exhaustive
checking, covering spaces with monodromy, and quotients by group
actions.
"""

__version__ = "0.1.0"
