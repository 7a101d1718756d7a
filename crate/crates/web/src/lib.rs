//! Browser bindings: single-point evaluation, temperature curves and
//! `(D, J)` heatmaps.

use wasm_bindgen::prelude::*;

use qcvur_core::relations::MeasurementSetup;
use qcvur_core::sweep::{evaluate_point, AxisRange, PointValues, CSV_HEADER};

/// Plane shown by [`heatmap`]: `D` in `[0, 2]`, `J` in `[-2, 2]`.
pub const D_RANGE: (f64, f64) = (0.0, 2.0);
pub const J_RANGE: (f64, f64) = (-2.0, 2.0);
const MAX_RESOLUTION: usize = 201;
const MAX_CURVE_POINTS: usize = 2001;

/// Names accepted by [`heatmap`], in CSV column order.
pub fn quantity_names() -> Vec<&'static str> {
    CSV_HEADER.split(',').skip(4).collect()
}

fn pick(v: &PointValues, quantity: &str) -> Option<f64> {
    match quantity {
        "gamma" => Some(v.gamma),
        "concurrence" => Some(v.concurrence),
        "l_tra" => Some(v.l_tra),
        "lhs" => Some(v.lhs),
        "w" => Some(v.w),
        "u" => v.u,
        "h_rb" => Some(v.h_rb),
        "h_sb" => Some(v.h_sb),
        "h_ab" => Some(v.h_ab),
        "eur_rhs" => Some(v.eur_rhs),
        "u_eur" => v.u_eur,
        _ => None,
    }
}

/// `(t, gamma, concurrence, w, u)` rows, flattened; undefined `u` is NaN.
pub fn curve_rows(
    d: f64,
    j: f64,
    theta: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if !(2..=MAX_CURVE_POINTS).contains(&points) {
        return Err(format!("points must be between 2 and {MAX_CURVE_POINTS}"));
    }
    let axis = AxisRange::new(t_min, t_max, points).map_err(|e| e.to_string())?;
    let setup = MeasurementSetup::standard(theta);
    let mut out = Vec::with_capacity(points * 5);
    for t in axis.values() {
        let v = evaluate_point(d, j, t, &setup).map_err(|e| e.to_string())?;
        out.extend([t, v.gamma, v.concurrence, v.w, v.u.unwrap_or(f64::NAN)]);
    }
    Ok(out)
}

/// Row-major `resolution x resolution` grid, `D` along rows and `J` along
/// columns. Points that are undefined or off the model domain are NaN.
pub fn heatmap_values(
    quantity: &str,
    t: f64,
    theta: f64,
    resolution: usize,
) -> Result<Vec<f64>, String> {
    if !quantity_names().contains(&quantity) {
        return Err(format!(
            "unknown quantity {quantity:?}; expected one of {}",
            quantity_names().join(", ")
        ));
    }
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must be between 2 and {MAX_RESOLUTION}"));
    }
    let d_axis = AxisRange::new(D_RANGE.0, D_RANGE.1, resolution).map_err(|e| e.to_string())?;
    let j_axis = AxisRange::new(J_RANGE.0, J_RANGE.1, resolution).map_err(|e| e.to_string())?;
    let setup = MeasurementSetup::standard(theta);
    let mut out = Vec::with_capacity(resolution * resolution);
    for d in d_axis.values() {
        for j in j_axis.values() {
            let value = evaluate_point(d, j, t, &setup)
                .ok()
                .and_then(|v| pick(&v, quantity));
            out.push(value.unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

/// Every quantity at one `(D, J, T)` point.
#[wasm_bindgen]
pub struct Point {
    values: PointValues,
}

#[wasm_bindgen]
impl Point {
    #[wasm_bindgen(getter)]
    pub fn gamma(&self) -> f64 {
        self.values.gamma
    }
    #[wasm_bindgen(getter)]
    pub fn concurrence(&self) -> f64 {
        self.values.concurrence
    }
    #[wasm_bindgen(getter)]
    pub fn l_tra(&self) -> f64 {
        self.values.l_tra
    }
    #[wasm_bindgen(getter)]
    pub fn lhs(&self) -> f64 {
        self.values.lhs
    }
    #[wasm_bindgen(getter)]
    pub fn w(&self) -> f64 {
        self.values.w
    }
    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Option<f64> {
        self.values.u
    }
    #[wasm_bindgen(getter)]
    pub fn h_rb(&self) -> f64 {
        self.values.h_rb
    }
    #[wasm_bindgen(getter)]
    pub fn h_sb(&self) -> f64 {
        self.values.h_sb
    }
    #[wasm_bindgen(getter)]
    pub fn h_ab(&self) -> f64 {
        self.values.h_ab
    }
    #[wasm_bindgen(getter)]
    pub fn eur_rhs(&self) -> f64 {
        self.values.eur_rhs
    }
    #[wasm_bindgen(getter)]
    pub fn u_eur(&self) -> Option<f64> {
        self.values.u_eur
    }
}

#[wasm_bindgen]
pub fn point(d: f64, j: f64, t: f64, theta: f64) -> Result<Point, JsError> {
    evaluate_point(d, j, t, &MeasurementSetup::standard(theta))
        .map(|values| Point { values })
        .map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn temperature_curve(
    d: f64,
    j: f64,
    theta: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    curve_rows(d, j, theta, t_min, t_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn heatmap(quantity: &str, t: f64, theta: f64, resolution: usize) -> Result<Vec<f64>, JsError> {
    heatmap_values(quantity, t, theta, resolution).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_shape_and_values() {
        let rows = curve_rows(1.0, 1.0, 0.5, 0.5, 1.0, 3).unwrap();
        assert_eq!(rows.len(), 15);
        assert_eq!(rows[10], 1.0);
        assert!((rows[11] - 0.334794709384799).abs() < 1e-12);
        assert!((rows[14] - 1.1130131416890086).abs() < 1e-10);
    }

    #[test]
    fn heatmap_marks_zero_coupling_column() {
        let grid = heatmap_values("gamma", 1.0, 0.5, 5).unwrap();
        assert_eq!(grid.len(), 25);
        // J = 0 sits in the middle column
        for row in 0..5 {
            assert!(grid[row * 5 + 2].is_nan());
            assert!(grid[row * 5].is_finite());
        }
    }

    #[test]
    fn heatmap_rejects_bad_requests() {
        assert!(heatmap_values("entropy", 1.0, 0.5, 5).is_err());
        assert!(heatmap_values("u", 1.0, 0.5, 1).is_err());
        assert!(heatmap_values("u", 1.0, 0.5, 10_000).is_err());
        assert!(curve_rows(1.0, 1.0, 0.5, 0.5, 1.0, 1).is_err());
        assert!(curve_rows(1.0, 1.0, 0.5, 1e-5, 1.0, 10).is_err());
    }

    #[test]
    fn quantity_list_follows_csv_columns() {
        assert_eq!(quantity_names().first(), Some(&"gamma"));
        assert_eq!(quantity_names().last(), Some(&"u_eur"));
        assert_eq!(quantity_names().len(), 11);
    }
}
