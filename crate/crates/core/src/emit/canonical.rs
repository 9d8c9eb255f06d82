//! Byte-deterministic JSON.
//!
//! Two-space indentation, LF line endings, object keys in codepoint order,
//! a terminal newline, and numbers without exponents or trailing zeros.

use std::io;

use serde::{Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::emit::EmitError;

/// A finite decimal. Serializing a non-finite value fails; integral values
/// serialize as integers.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Decimal(pub f64);

/// Largest magnitude below which every integer is exactly representable.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if !v.is_finite() {
            return Err(serde::ser::Error::custom(format!(
                "non-finite number {v} cannot be serialized"
            )));
        }
        if v.fract() == 0.0 && v.abs() < EXACT_INT_LIMIT {
            serializer.serialize_i64(v as i64)
        } else {
            serializer.serialize_f64(v)
        }
    }
}

impl From<f64> for Decimal {
    fn from(v: f64) -> Self {
        Decimal(v)
    }
}

struct CanonicalFormatter {
    inner: PrettyFormatter<'static>,
}

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            // Also folds -0.0.
            writer.write_all(b"0")
        } else {
            // `Display` for f64 is the shortest round-trip form and never
            // uses an exponent.
            write!(writer, "{value}")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes `value` canonically. Struct fields and map keys are emitted
/// in sorted order regardless of declaration order.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, EmitError> {
    // Round-tripping through `Value` sorts keys (its map is a BTreeMap).
    let value = serde_json::to_value(value).map_err(EmitError::Serialize)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        CanonicalFormatter {
            inner: PrettyFormatter::with_indent(b"  "),
        },
    );
    value.serialize(&mut ser).map_err(EmitError::Serialize)?;
    out.push(b'\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::{json, Value};

    fn render(v: &Value) -> String {
        String::from_utf8(canonical_json(v).unwrap()).unwrap()
    }

    #[test]
    fn keys_are_sorted() {
        assert_eq!(render(&json!({"b": 1, "a": 2})), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
    }

    #[test]
    fn struct_fields_are_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        let out = String::from_utf8(canonical_json(&S { zeta: 1, alpha: 2 }).unwrap()).unwrap();
        assert_eq!(out, "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}\n");
    }

    #[test]
    fn decimals() {
        assert_eq!(render(&json!(1.5)), "1.5\n");
        assert_eq!(render(&json!(500.0)), "500\n");
        assert_eq!(render(&json!(-0.0)), "0\n");
        assert_eq!(render(&json!(1e21)), "1000000000000000000000\n");
        assert_eq!(render(&json!(1.5e-7)), "0.00000015\n");
        let d = String::from_utf8(canonical_json(&Decimal(500.0)).unwrap()).unwrap();
        assert_eq!(d, "500\n");
        let d = String::from_utf8(canonical_json(&Decimal(44.06)).unwrap()).unwrap();
        assert_eq!(d, "44.06\n");
    }

    #[test]
    fn non_finite_is_an_error() {
        assert!(canonical_json(&Decimal(f64::NAN)).is_err());
        assert!(canonical_json(&vec![Decimal(1.0), Decimal(f64::INFINITY)]).is_err());
    }

    #[test]
    fn layout() {
        let out = render(&json!({"a": [], "b": {}, "c": [1, {"d": null, "e": true}], "f": "ß\"x"}));
        assert_eq!(
            out,
            "{\n  \"a\": [],\n  \"b\": {},\n  \"c\": [\n    1,\n    {\n      \"d\": null,\n      \"e\": true\n    }\n  ],\n  \"f\": \"ß\\\"x\"\n}\n"
        );
        assert!(out.lines().all(|l| l == l.trim_end()));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn deterministic() {
        let v = json!({"z": [3, 2, 1], "y": {"b": 1.25, "a": "x"}});
        assert_eq!(canonical_json(&v).unwrap(), canonical_json(&v).unwrap());
    }

    /// Structural equality that compares numbers by value.
    fn same(a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Number(x), Value::Number(y)) => x.as_f64() == y.as_f64(),
            (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(a, b)| same(a, b)),
            (Value::Object(x), Value::Object(y)) => {
                x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| same(v, w)))
            }
            _ => a == b,
        }
    }

    fn arb_json() -> impl Strategy<Value = Value> {
        let leaf = prop_oneof![
            Just(Value::Null),
            any::<bool>().prop_map(Value::Bool),
            any::<i64>().prop_map(|n| json!(n)),
            (-1e12f64..1e12).prop_map(|f| json!(f)),
            "[a-zà-ü \"\\\\]{0,8}".prop_map(Value::String),
        ];
        leaf.prop_recursive(4, 32, 6, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..6).prop_map(Value::Array),
                prop::collection::btree_map("[a-zA-Z_]{1,6}", inner, 0..6)
                    .prop_map(|m| Value::Object(m.into_iter().collect())),
            ]
        })
    }

    proptest! {
        #[test]
        fn reparses_to_equal_value(v in arb_json()) {
            let bytes = canonical_json(&v).unwrap();
            let back: Value = serde_json::from_slice(&bytes).unwrap();
            prop_assert!(same(&v, &back), "{v:?} vs {back:?}");
            prop_assert_eq!(canonical_json(&back).unwrap(), bytes);
        }
    }
}
