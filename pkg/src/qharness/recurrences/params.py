from dataclasses import dataclass, field
from typing import Any, Dict

from .exceptions import ParameterRangeError
from .qnum import Mode, Scalar, format_scalar, mode_of, parse_scalar, to_mode


def below_lower_branch(q: Scalar, z: Scalar) -> bool:
    """q < 1 - 2 sqrt(z), decided without taking the square root."""
    return 1 - q > 0 and (1 - q) ** 2 > 4 * z


def on_lower_branch(q: Scalar, z: Scalar) -> bool:
    """q = 1 - 2 sqrt(z)."""
    return 1 - q >= 0 and (1 - q) ** 2 == 4 * z


def within_upper_branch(q: Scalar, z: Scalar) -> bool:
    """q <= 1 + 2 sqrt(z)."""
    return q <= 1 or (q - 1) ** 2 <= 4 * z


@dataclass(frozen=True)
class MobiusParams:
    """Parameters of the map x -> (1 + q x) / (1 - z x); z plays the role of sigma*tau."""
    q: Scalar
    z: Scalar

    def __post_init__(self):
        if self.z < 0:
            raise ParameterRangeError(f"z must be non-negative, got {self.z}")

    @property
    def mode(self) -> Mode:
        return mode_of(self.q, self.z)


@dataclass(frozen=True)
class QHParams:
    """The five quadratic-harness parameters.

    Values are coerced to the arithmetic of ``mode`` on construction, so
    ``QHParams(q="1/2")`` holds ``Fraction(1, 2)``.
    """
    sigma: Scalar = 0
    tau: Scalar = 0
    theta: Scalar = 0
    eta: Scalar = 0
    q: Scalar = 0
    mode: Mode = field(default=Mode.EXACT)

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        for name in ("sigma", "tau", "theta", "eta", "q"):
            object.__setattr__(self, name, _coerce(getattr(self, name), mode))

        if self.sigma < 0 or self.tau < 0:
            raise ParameterRangeError(
                f"sigma and tau must be non-negative, got sigma={self.sigma}, tau={self.tau}"
            )
        if self.q < -1:
            raise ParameterRangeError(f"q must be at least -1, got {self.q}")
        if not within_upper_branch(self.q, self.sigma_tau):
            raise ParameterRangeError(
                f"q={self.q} exceeds 1 + 2*sqrt(sigma*tau) for sigma*tau={self.sigma_tau}"
            )

    @property
    def sigma_tau(self) -> Scalar:
        return self.sigma * self.tau

    @property
    def mobius(self) -> MobiusParams:
        return MobiusParams(q=self.q, z=self.sigma_tau)

    @property
    def mu(self):
        """The drift vector (theta, eta)."""
        return (self.theta, self.eta)

    def replace(self, **changes) -> "QHParams":
        values = self.as_values()
        values.update(changes)
        return QHParams(**values)

    def as_values(self) -> Dict[str, Any]:
        return {
            "sigma": self.sigma,
            "tau": self.tau,
            "theta": self.theta,
            "eta": self.eta,
            "q": self.q,
            "mode": self.mode,
        }

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view with rationals as strings."""
        return {
            "sigma": format_scalar(self.sigma),
            "tau": format_scalar(self.tau),
            "theta": format_scalar(self.theta),
            "eta": format_scalar(self.eta),
            "q": format_scalar(self.q),
        }


def _coerce(value: Any, mode: Mode) -> Scalar:
    if isinstance(value, str):
        return parse_scalar(value, mode)
    return to_mode(value, mode)
