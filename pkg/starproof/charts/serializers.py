from rest_framework import serializers

from .exceptions import ExprSyntaxError
from .expr import format_expr, parse_expr


class ExprField(serializers.Field):
    """Star expression read from and written as its canonical print"""

    def to_representation(self, value):
        return format_expr(value)

    def to_internal_value(self, data):
        if not isinstance(data, str):
            raise serializers.ValidationError("Expected an expression string")
        try:
            return parse_expr(data)
        except ExprSyntaxError as exc:
            raise serializers.ValidationError(str(exc))


class ExprGenSerializer(serializers.Serializer):
    """Serializer for random expression generator parameters"""
    seed = serializers.IntegerField()
    max_size = serializers.IntegerField()
    alphabet_size = serializers.IntegerField()

    def validate_max_size(self, value):
        """Expressions need at least one node"""
        if value < 1:
            raise serializers.ValidationError("max_size must be at least 1")
        return value

    def validate_alphabet_size(self, value):
        """Actions are drawn from a..z"""
        if not 1 <= value <= 26:
            raise serializers.ValidationError("alphabet_size must be between 1 and 26")
        return value


class ViolationSerializer(serializers.Serializer):
    """Serializer for one witness violation"""
    kind = serializers.CharField()
    site = serializers.CharField()


class WitnessReportSerializer(serializers.Serializer):
    """Serializer for LLEE-witness check reports"""
    ok = serializers.BooleanField()
    violations = ViolationSerializer(many=True)


class EliminationStepSerializer(serializers.Serializer):
    step = serializers.IntegerField()
    vertex = serializers.IntegerField()
    entries = serializers.SerializerMethodField()

    def get_entries(self, obj):
        return [str(t) for t in obj.entries]


class LoopEliminationSerializer(serializers.Serializer):
    """Serializer for loop elimination results"""
    lee = serializers.BooleanField()
    diagnosis = serializers.CharField(allow_blank=True)
    trace = EliminationStepSerializer(many=True)
    witness = serializers.SerializerMethodField()

    def get_witness(self, obj):
        """Entry levels of the witness keyed by transition print"""
        if obj.witness is None:
            return None
        return {str(t): obj.witness.level(t) for t in obj.witness.transitions}


class CollapseStepSerializer(serializers.Serializer):
    """Serializer for one row of a collapse trace manifest"""
    step = serializers.IntegerField()
    w1 = serializers.IntegerField()
    w2 = serializers.IntegerField()
    condition = serializers.ChoiceField(choices=['C1', 'C2', 'C3'])
    pivot = serializers.IntegerField(allow_null=True)
    chain = serializers.ListField(child=serializers.IntegerField())
    file = serializers.CharField()


class BisimulationSerializer(serializers.Serializer):
    """Serializer for bisimilarity reports"""
    bisimilar = serializers.BooleanField()
    pairs = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))


class SuiteReportSerializer(serializers.Serializer):
    """Serializer for property suite results"""
    name = serializers.CharField()
    seed = serializers.IntegerField()
    cases = serializers.IntegerField()
    passed = serializers.BooleanField()
    counterexample = ExprField(allow_null=True)
    message = serializers.CharField(allow_blank=True)
