//! JSON form of numeric results: `{"dim": d, "data": [[re, im], ...]}`,
//! row-major.

use serde_json::{json, Value};

use super::basis::CMatrix;
use crate::error::{Error, Result};

pub fn matrix_to_value(m: &CMatrix) -> Value {
    let mut data = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            data.push(json!([z.re, z.im]));
        }
    }
    json!({ "dim": m.nrows(), "data": data })
}

pub fn matrix_from_value(v: &Value) -> Result<CMatrix> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::validation("matrix needs integer \"dim\""))? as usize;
    let data = v
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::validation("matrix needs \"data\""))?;
    if data.len() != dim * dim {
        return Err(Error::validation("matrix data length differs from dim^2"));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (k, z) in data.iter().enumerate() {
        let pair = z
            .as_array()
            .filter(|p| p.len() == 2)
            .and_then(|p| Some((p[0].as_f64()?, p[1].as_f64()?)))
            .ok_or_else(|| Error::validation("matrix entries must be [re, im]"))?;
        m[(k / dim, k % dim)] = num_complex::Complex64::new(pair.0, pair.1);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn row_major_round_trip() {
        let m = CMatrix::from_fn(2, 2, |r, c| Complex64::new(r as f64, c as f64 + 0.5));
        let v = matrix_to_value(&m);
        assert_eq!(v["data"][1], json!([0.0, 1.5]));
        assert_eq!(matrix_from_value(&v).unwrap(), m);
    }
}
