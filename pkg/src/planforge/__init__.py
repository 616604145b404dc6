"""planforge: a planning-domain engineering workbench.

Model PDDL domains at three abstraction levels, auto-complete declarations
from a template knowledge base, check consistency, plan, validate plans
natively (states, causal links, flaws), and repair flawed domains.
"""

__version__ = "0.1.0"
