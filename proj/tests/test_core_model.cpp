#include "support.hpp"

#include "streamclean/schema.hpp"
#include "streamclean/value.hpp"
#include "streamclean/vector.hpp"

#include <gtest/gtest.h>

using namespace streamclean;
using namespace testsupport;

namespace {

Schema five_attrs() {
    auto ts = keyed("timestamp", ValueType::Instant);
    ts.unique = true;
    return schema_of({ts, bounded("temperature", -10, 60), bounded("humidity", 0, 100), attr("light", ValueType::Float),
                      attr("voltage", ValueType::Float)});
}

Schema two_floats() { return schema_of({attr("x", ValueType::Float), attr("y", ValueType::Float)}); }

}  // namespace

TEST(ValidateSchema, WellFormedSchemaHasNoFaults) { EXPECT_TRUE(validate_schema(five_attrs()).empty()); }

TEST(ValidateSchema, DuplicateNameIsNamed) {
    auto s = schema_of({attr("temp", ValueType::Float), attr("temp", ValueType::Float)});
    auto faults = validate_schema(s);
    ASSERT_EQ(faults.size(), 1u);
    EXPECT_EQ(faults[0].subject, "temp");
}

TEST(ValidateSchema, DependentInsideDeterminantIsNamed) {
    auto s = schema_of({attr("a", ValueType::Integer), attr("b", ValueType::Integer)});
    FunctionalDependency fd;
    fd.determinant = {"a", "b"};
    fd.dependent = "b";
    s.functional_dependencies.push_back(fd);
    auto faults = validate_schema(s);
    ASSERT_EQ(faults.size(), 1u);
    EXPECT_NE(faults[0].subject.find(fd.label()), std::string::npos);
}

TEST(ValidateSchema, OtherInvariants) {
    auto s = five_attrs();
    s.attributes[1].interval = IntervalConstraint(ContinuousInterval{5, 1});
    EXPECT_FALSE(validate_schema(s).empty());

    s = five_attrs();
    s.attributes[1].interval = IntervalConstraint(DiscreteInterval{});
    EXPECT_FALSE(validate_schema(s).empty());

    s = five_attrs();
    s.expected_cadence = Duration{0};
    EXPECT_FALSE(validate_schema(s).empty());

    s = five_attrs();
    s.contradiction_scope = {"timestamp"};
    EXPECT_FALSE(validate_schema(s).empty());

    s = five_attrs();
    s.contradiction_scope = {"nope"};
    EXPECT_FALSE(validate_schema(s).empty());
}

TEST(ParseVector, ConvertsDeclaredTypes) {
    auto v = parse_vector({"22.5", "45.1"}, two_floats(), 1, Instant{0});
    EXPECT_EQ(v.values, (ValueTuple{22.5, 45.1}));
    EXPECT_TRUE(v.type_faults.empty());
}

TEST(ParseVector, MissingMarkerBecomesNull) {
    auto s = two_floats();
    s.attributes[0].missing_markers = {"-9999"};
    auto v = parse_vector({"-9999", "45.1"}, s, 1, Instant{0});
    EXPECT_TRUE(v.values[0].is_null());
    EXPECT_EQ(v.values[1], AttributeValue(45.1));
    EXPECT_TRUE(v.type_faults.empty());
}

TEST(ParseVector, MarkerMatchesRawTextEvenForTextAttributes) {
    auto s = schema_of({attr("t", ValueType::Text)});
    s.attributes[0].missing_markers = {"N/A"};
    EXPECT_TRUE(parse_vector({"N/A"}, s, 1, Instant{0}).values[0].is_null());
    EXPECT_TRUE(parse_vector({""}, s, 1, Instant{0}).values[0].is_null());
}

TEST(ParseVector, UnconvertibleFieldIsCarriedAsText) {
    auto v = parse_vector({"abc", "45.1"}, two_floats(), 1, Instant{0});
    ASSERT_TRUE(v.values[0].is_text());
    EXPECT_EQ(v.values[0].as_text(), "abc");
    EXPECT_TRUE(v.has_type_fault(0));
    EXPECT_FALSE(v.has_type_fault(1));
}

TEST(ParseVector, ArityMismatchReportsCounts) {
    try {
        parse_vector({"1"}, two_floats(), 1, Instant{0});
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.expected(), 2u);
        EXPECT_EQ(e.actual(), 1u);
    }
}

TEST(ParseVector, RoundTripsCleanFields) {
    auto s = schema_of({attr("i", ValueType::Integer), attr("f", ValueType::Float), attr("t", ValueType::Text),
                        attr("b", ValueType::Boolean), attr("ts", ValueType::Instant)});
    const std::vector<std::string> raw{"-42", "3.25", "hello, world", "true", "2004-03-01 00:00:30"};
    EXPECT_EQ(serialize_vector(parse_vector(raw, s, 7, Instant{0})), raw);
}

TEST(Value, InstantFormatting) {
    auto t = parse_instant("2004-03-01T12:34:56.789Z");
    ASSERT_TRUE(t);
    EXPECT_EQ(format_instant(*t), "2004-03-01 12:34:56.789");
    EXPECT_EQ(format_instant(Instant{0}), "1970-01-01 00:00:00");
    EXPECT_FALSE(parse_instant("yesterday"));
}

TEST(Value, StrictConversionRejectsSloppyText) {
    EXPECT_FALSE(convert_strict("3,14", ValueType::Float));
    EXPECT_FALSE(convert_strict(" 3", ValueType::Integer));
    EXPECT_EQ(*convert_strict("42", ValueType::Integer), AttributeValue(42));
    EXPECT_EQ(*convert_strict("false", ValueType::Boolean), AttributeValue(false));
}

TEST(Value, FloatFormattingIsCanonical) {
    for (double x : {0.1, 22.5, -1e-7, 1234567.125, 3.0}) {
        auto text = format_float(x);
        auto back = convert_strict(text, ValueType::Float);
        ASSERT_TRUE(back) << text;
        EXPECT_EQ(back->as_float(), x);
        EXPECT_EQ(format_float(back->as_float()), text);
    }
}

TEST(Value, OrderingAndNumericView) {
    EXPECT_LT(AttributeValue(1), AttributeValue(2));
    EXPECT_TRUE(AttributeValue::null().is_null());
    EXPECT_EQ(*AttributeValue(Instant{1500}).numeric(), 1500.0);
    EXPECT_FALSE(AttributeValue("x").numeric());
    EXPECT_EQ(from_numeric(2.6, ValueType::Integer), AttributeValue(3));
}

TEST(Schema, KeysFallBackToUniqueAttributes) {
    auto s = schema_of({attr("a", ValueType::Integer), attr("b", ValueType::Integer)});
    s.attributes[1].unique = true;
    EXPECT_EQ(s.key_positions(), std::vector<std::size_t>{1});
    s.attributes[0].key_member = true;
    EXPECT_EQ(s.key_positions(), std::vector<std::size_t>{0});
}

TEST(Schema, RatioColumns) {
    auto s = five_attrs();
    s.attributes.push_back(attr("label", ValueType::Text));
    auto code = attr("code", ValueType::Integer);
    code.interval = IntervalConstraint(DiscreteInterval{{1, 2, 3}});
    s.attributes.push_back(code);
    EXPECT_TRUE(s.is_ratio_column(0));
    EXPECT_TRUE(s.is_ratio_column(1));
    EXPECT_FALSE(s.is_ratio_column(5));
    EXPECT_FALSE(s.is_ratio_column(6));
}
