"""Guard exceptions shared across the package."""


class MemoryGuardError(RuntimeError):
    """Dense materialization request exceeds the configured site budget."""


class BranchViolationError(RuntimeError):
    """Exact quasi-energies would fold across the principal branch edge."""
