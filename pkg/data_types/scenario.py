import math

from marshmallow import (
    RAISE,
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates,
    validates_schema,
)

from core.config.settings import settings
from data_types.enums import GammaPathKind


class FloatList(fields.Field):
    """Comma-separated floats, e.g. `custom_values = 2.0, 3.5, 2.5`."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return ", ".join(repr(float(item)) for item in value)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, (list, tuple)):
            items = value
        else:
            items = [item for item in str(value).split(",") if item.strip()]
        try:
            return tuple(float(item) for item in items)
        except ValueError as error:
            raise ValidationError(f"not a comma-separated list of numbers: {value!r}") from error


class _SectionSchema(Schema):
    class Meta:
        unknown = RAISE


class PreferencesSectionSchema(_SectionSchema):
    delta = fields.Float(
        validate=validate.Range(min=0.0, error="delta must be non-negative"),
        metadata={"description": "Subjective discount rate per period"}
    )
    beta = fields.Float(
        validate=validate.Range(min=0.0, max=1.0, min_inclusive=False,
                                error="beta must satisfy 0 < beta <= 1"),
        metadata={"description": "Subjective discount factor exp(-delta)"}
    )
    rho = fields.Float(required=True, allow_nan=False)
    gamma = fields.Float(required=True, allow_nan=False)

    @validates("rho")
    def validate_rho(self, value, **kwargs):
        if value <= 0.0 or value == 1.0:
            raise ValidationError("rho must be positive and not equal to 1")

    @validates("gamma")
    def validate_gamma(self, value, **kwargs):
        if value <= 0.0:
            raise ValidationError("gamma must be positive")

    @validates_schema
    def exactly_one_discount(self, data, **kwargs):
        if ("delta" in data) == ("beta" in data):
            raise ValidationError("exactly one of delta or beta must be given", "_schema")

    @post_load
    def to_delta(self, data, **kwargs):
        """beta is converted to delta = -ln(beta) at ingestion."""
        if "beta" in data:
            data["delta"] = max(0.0, -math.log(data.pop("beta")))
        return data


class GrowthSectionSchema(_SectionSchema):
    mu = fields.Float(required=True, allow_nan=False)
    sigma2 = fields.Float(
        required=True,
        allow_nan=False,
        validate=validate.Range(min=0.0, error="sigma2 must be non-negative"),
    )


class ShockSectionSchema(_SectionSchema):
    kind = fields.Str(
        required=True,
        validate=validate.OneOf([kind.value for kind in GammaPathKind])
    )
    base_gamma = fields.Float(allow_nan=False)
    shock_delta = fields.Float(load_default=0.0, allow_nan=False)
    shock_time = fields.Int(load_default=1, strict=False)
    custom_values = FloatList()
    terminal_gamma = fields.Float(allow_nan=False)

    @validates_schema
    def custom_needs_terminal(self, data, **kwargs):
        if data.get("kind") == GammaPathKind.CUSTOM.value and "terminal_gamma" not in data:
            raise ValidationError("custom gamma paths must declare terminal_gamma", "terminal_gamma")


class SimulationSectionSchema(_SectionSchema):
    n_draws = fields.Int(validate=validate.Range(min=2, error="n_draws must be at least 2"))
    horizon = fields.Int(validate=validate.Range(min=1, error="horizon must be positive"))
    seed = fields.Int(validate=validate.Range(min=0, max=2**64 - 1,
                                              error="seed must be a 64-bit unsigned integer"))
    stream_count = fields.Int(validate=validate.Range(min=1, error="stream_count must be positive"))
    antithetic = fields.Bool()
    fd_step = fields.Float(validate=validate.Range(min=0.0, min_inclusive=False))
    z_threshold = fields.Float(validate=validate.Range(min=0.0, min_inclusive=False))


class SweepSectionSchema(_SectionSchema):
    parameter = fields.Str(
        required=True,
        validate=validate.OneOf(list(settings.SWEEP_PARAMETERS),
                                error="sweep parameter must be one of: {choices}")
    )
    start = fields.Float(required=True, allow_nan=False)
    stop = fields.Float(required=True, allow_nan=False)
    count = fields.Int(required=True, validate=validate.Range(min=1, error="count must be positive"))


class ScenarioFileSchema(_SectionSchema):
    """Whole scenario file, one nested schema per [section]."""

    preferences = fields.Nested(PreferencesSectionSchema, required=True)
    growth = fields.Nested(GrowthSectionSchema, required=True)
    shock = fields.Nested(ShockSectionSchema)
    simulation = fields.Nested(SimulationSectionSchema)
    sweep = fields.Nested(SweepSectionSchema)

    @post_load
    def make_object(self, data, **kwargs):
        """Convert validated sections into the immutable Scenario model."""
        from schemas.dynamics import GammaPath
        from schemas.economy import GrowthProcess, Preferences
        from schemas.scenario import Scenario, SweepAxis
        from schemas.simulation import SimulationConfig

        preferences = Preferences(**data["preferences"])
        gamma_path = None
        if "shock" in data:
            shock = dict(data["shock"])
            shock.setdefault("base_gamma", preferences.gamma)
            if shock["kind"] == GammaPathKind.CUSTOM.value:
                values = shock.get("custom_values", ())
                if values:
                    shock["base_gamma"] = values[0]
            gamma_path = GammaPath(**shock)

        return Scenario(
            preferences=preferences,
            growth=GrowthProcess(**data["growth"]),
            gamma_path=gamma_path,
            simulation=SimulationConfig(**data["simulation"]) if "simulation" in data else None,
            sweep=SweepAxis(**data["sweep"]) if "sweep" in data else None,
        )
