from django.conf import settings
from rest_framework import serializers

from state_transfer.sweep import BETA2_SYMMETRIC, BETA2_ZERO, DEPHASING, DEPOLARIZING, OUTPUT_FORMATS
from state_transfer.utils.message_themes import errors as error_messages

DEFAULT_ALPHA = settings.DEFAULT_ALPHA
DEFAULT_G = settings.DEFAULT_G
FOCK_N_MAX = settings.FOCK_N_MAX
PUMP_N_MAX = settings.PUMP_N_MAX
SWEEP_OUTPUT_DIR = settings.SWEEP_OUTPUT_DIR
THRESHOLD_P_TOLERANCE = settings.THRESHOLD_P_TOLERANCE
THRESHOLD_THETA_TOLERANCE_DEG = settings.THRESHOLD_THETA_TOLERANCE_DEG


def unit_interval_field(**kwargs) -> serializers.FloatField:
    return serializers.FloatField(min_value=0.0, max_value=1.0, **kwargs)


class CouplingSerializer(serializers.Serializer):
    g = serializers.FloatField(required=False, default=DEFAULT_G, min_value=-0.999999, max_value=0.999999)
    alpha = serializers.FloatField(required=False, default=DEFAULT_ALPHA, min_value=0.0)


class ChannelSerializer(serializers.Serializer):
    p = unit_interval_field(required=False, allow_null=True, default=None)
    gamma = serializers.FloatField(required=False, allow_null=True, default=None, min_value=0.0)
    distance = serializers.FloatField(required=False, allow_null=True, default=None, min_value=0.0)
    beta1 = unit_interval_field(required=False, allow_null=True, default=None)
    beta2 = unit_interval_field(required=False, allow_null=True, default=None)
    p2 = unit_interval_field(required=False, allow_null=True, default=None)

    def validate(self, attrs: dict) -> dict:
        depolarizing = any(attrs.get(key) is not None for key in ('p', 'gamma', 'distance', 'p2'))
        dephasing = any(attrs.get(key) is not None for key in ('beta1', 'beta2'))

        if depolarizing and dephasing:
            raise serializers.ValidationError(error_messages.DEPOLARIZING_AND_DEPHASING_EXCLUSIVE)
        if attrs.get('p') is not None and (attrs.get('gamma') is not None or attrs.get('distance') is not None):
            raise serializers.ValidationError(error_messages.P_AND_DISTANCE_EXCLUSIVE)
        if (attrs.get('gamma') is None) != (attrs.get('distance') is None):
            raise serializers.ValidationError(error_messages.P_OR_DISTANCE_REQUIRED)
        if not dephasing and attrs.get('p') is None and attrs.get('gamma') is None:
            raise serializers.ValidationError(error_messages.P_OR_DISTANCE_REQUIRED)

        return attrs


class TransferSerializer(CouplingSerializer, ChannelSerializer):
    theta = serializers.FloatField(required=True, min_value=0.0, max_value=90.0)
    phi = serializers.FloatField(required=False, default=0.0)
    format = serializers.ChoiceField(choices=OUTPUT_FORMATS, required=False, default='csv')


class SweepSerializer(CouplingSerializer):
    mode = serializers.ChoiceField(choices=(DEPOLARIZING, DEPHASING), required=False, default=DEPOLARIZING)
    theta_min = serializers.FloatField(required=False, default=0.0, min_value=0.0, max_value=90.0)
    theta_max = serializers.FloatField(required=False, default=90.0, min_value=0.0, max_value=90.0)
    theta_steps = serializers.IntegerField(required=False, default=19, min_value=2)
    p_min = unit_interval_field(required=False, default=0.0)
    p_max = unit_interval_field(required=False, default=1.0)
    p_steps = serializers.IntegerField(required=False, default=21, min_value=2)
    beta_min = unit_interval_field(required=False, default=0.0)
    beta_max = unit_interval_field(required=False, default=1.0)
    beta_steps = serializers.IntegerField(required=False, default=11, min_value=2)
    beta2_mode = serializers.ChoiceField(choices=(BETA2_SYMMETRIC, BETA2_ZERO), required=False, default=BETA2_SYMMETRIC)
    phi = serializers.FloatField(required=False, default=0.0)
    nmax = serializers.IntegerField(required=False, default=FOCK_N_MAX, min_value=1)
    pump_nmax = serializers.IntegerField(required=False, default=PUMP_N_MAX, min_value=1)
    output = serializers.CharField(required=False, allow_blank=False, allow_null=True, default=None)
    format = serializers.ChoiceField(choices=OUTPUT_FORMATS, required=False, default='csv')
    workers = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)

    def validate(self, attrs: dict) -> dict:
        for range_name in ('theta', 'p', 'beta'):
            range_min, range_max = attrs[f'{range_name}_min'], attrs[f'{range_name}_max']
            if range_min > range_max:
                raise serializers.ValidationError(
                    error_messages.range_min_greater_than_max(range_name, range_min, range_max)
                )

        if attrs.get('output') is None:
            attrs['output'] = f'{SWEEP_OUTPUT_DIR}/sweep_{attrs["mode"]}.{attrs["format"]}'

        return attrs


class ThresholdSerializer(serializers.Serializer):
    tol = serializers.FloatField(required=False, default=THRESHOLD_P_TOLERANCE, min_value=1e-15)
    theta_tol = serializers.FloatField(required=False, default=THRESHOLD_THETA_TOLERANCE_DEG, min_value=1e-12)
    p_samples = serializers.ListField(
        child=unit_interval_field(), required=False, default=lambda: [0.75, 0.85, 0.95], allow_empty=True
    )
    format = serializers.ChoiceField(choices=OUTPUT_FORMATS, required=False, default='json')


class ValidateSerializer(CouplingSerializer):
    nmax = serializers.IntegerField(required=False, default=FOCK_N_MAX, min_value=1)
    pump_nmax = serializers.IntegerField(required=False, default=PUMP_N_MAX, min_value=1)
    tol = serializers.FloatField(required=False, allow_null=True, default=None, min_value=0.0)
