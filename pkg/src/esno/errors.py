class DomainError(ValueError):
    """A state lies outside the physical domain of its model."""


class NonPhysicalStateError(DomainError):
    """Density or pressure below the positivity floor, or a non-finite value."""

    def __init__(self, quantity, index=None, value=None, time=None, stage=None):
        self.quantity = quantity
        self.index = index
        self.value = value
        self.time = time
        self.stage = stage
        super().__init__(self._message())

    def _message(self):
        msg = f"non-physical state: {self.quantity}"
        if self.value is not None:
            msg += f"={self.value:.6g}"
        if self.index is not None:
            msg += f" at cell {self.index}"
        if self.time is not None:
            msg += f", t={self.time:.6g}"
        if self.stage is not None:
            msg += f", RK stage {self.stage}"
        return msg

    def with_context(self, **kw):
        fields = dict(index=self.index, value=self.value, time=self.time, stage=self.stage)
        fields.update({k: v for k, v in kw.items() if v is not None})
        return NonPhysicalStateError(self.quantity, **fields)


class ParameterError(ValueError):
    """An argument is outside its admissible range."""


class ConfigurationError(ValueError):
    """Inconsistent scheme, grid or run configuration."""


class CapabilityError(LookupError):
    """The requested quantity is not available (e.g. no exact solution)."""
