use super::{AxisRange, SweepGrid};
use crate::error::{Error, Result};
use crate::relations::MeasurementSetup;

pub const PRESET_NAMES: [&str; 12] = [
    "fig1a", "fig1b", "fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "fig6a", "fig6b",
    "fig7a", "fig7b",
];

const THETA: f64 = 0.5;
const GRID_2D: usize = 101;
const GRID_1D: usize = 401;

/// A named figure configuration. The CSV always carries every column;
/// `columns` names the ones the figure plots.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub grid: SweepGrid,
    pub setup: MeasurementSetup,
    pub columns: &'static [&'static str],
}

fn axis(start: f64, stop: f64, steps: usize) -> AxisRange {
    AxisRange { start, stop, steps }
}

fn dj_plane(t: f64) -> (AxisRange, AxisRange, AxisRange) {
    (
        axis(0.0, 2.0, GRID_2D),
        axis(-2.0, 2.0, GRID_2D),
        AxisRange::fixed(t),
    )
}

fn t_line() -> (AxisRange, AxisRange, AxisRange) {
    (
        AxisRange::fixed(1.0),
        AxisRange::fixed(1.0),
        axis(0.01, 5.0, GRID_1D),
    )
}

/// `(T, D)` plane at fixed `J`; `gamma` is emitted per point.
fn td_plane(j: f64) -> (AxisRange, AxisRange, AxisRange) {
    (
        axis(0.0, 2.0, GRID_2D),
        AxisRange::fixed(j),
        axis(0.001, 5.0, GRID_2D),
    )
}

pub fn figure_preset(name: &str) -> Result<Preset> {
    let (name, (d, j, t), columns): (&'static str, _, &'static [&'static str]) = match name {
        "fig1a" => ("fig1a", dj_plane(0.5), &["concurrence", "gamma", "w"]),
        "fig1b" => ("fig1b", dj_plane(1.0), &["concurrence", "gamma", "w"]),
        "fig2" => ("fig2", t_line(), &["w", "concurrence", "gamma"]),
        "fig3a" => ("fig3a", td_plane(1.0), &["gamma", "w"]),
        "fig3b" => ("fig3b", td_plane(-1.0), &["gamma", "w"]),
        "fig4a" => ("fig4a", dj_plane(0.5), &["u"]),
        "fig4b" => ("fig4b", dj_plane(1.0), &["u"]),
        "fig5" => ("fig5", t_line(), &["u", "concurrence", "gamma"]),
        "fig6a" => ("fig6a", td_plane(1.0), &["gamma", "u"]),
        "fig6b" => ("fig6b", td_plane(-1.0), &["gamma", "u"]),
        "fig7a" => ("fig7a", dj_plane(1.0), &["u_eur"]),
        "fig7b" => ("fig7b", dj_plane(1.0), &["u"]),
        other => {
            return Err(Error::Usage(format!(
                "unknown preset {other:?}; valid presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(Preset {
        name,
        grid: SweepGrid::new(d, j, t, THETA)?,
        setup: MeasurementSetup::standard(THETA),
        columns,
    })
}
