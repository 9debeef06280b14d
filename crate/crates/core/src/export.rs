//! CSV writers. Floating-point values are printed with 17 significant digits
//! so that files round-trip exactly and are byte-stable across runs.

use std::io::Write;

use crate::circuit::ObservableSeries;
use crate::error::{argument, Result};
use crate::scars::ScarSet;
use crate::spectral::EigenstateDiagnostics;
use crate::stats::EnsembleResult;

/// `x` with 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `n,energy,entropy_nats,vacuum_overlap,sigma_z_<site>`.
pub fn write_spectral_csv<W: Write>(mut w: W, rows: &[EigenstateDiagnostics], site: usize) -> Result<()> {
    writeln!(w, "n,energy,entropy_nats,vacuum_overlap,sigma_z_{site}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.n,
            fmt17(r.energy),
            fmt17(r.entropy),
            fmt17(r.vacuum_overlap),
            fmt17(r.sigma_z)
        )?;
    }
    Ok(())
}

/// `n,energy,overlap,entropy,is_scar,runnerup_overlap`; the last column holds
/// the overlap of band runner-ups and is empty elsewhere.
pub fn write_scar_csv<W: Write>(mut w: W, rows: &[EigenstateDiagnostics], scars: &ScarSet) -> Result<()> {
    writeln!(w, "n,energy,overlap,entropy,is_scar,runnerup_overlap")?;
    for r in rows {
        let runner =
            if scars.runner_ups().binary_search(&r.n).is_ok() { fmt17(r.vacuum_overlap) } else { String::new() };
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            fmt17(r.energy),
            fmt17(r.vacuum_overlap),
            fmt17(r.entropy),
            u8::from(scars.contains(r.n)),
            runner
        )?;
    }
    Ok(())
}

/// `step,time,loschmidt,sigma_z_<site>,entropy_nats,norm`; the entropy column
/// is empty when it was not recorded.
pub fn write_trajectory_csv<W: Write>(mut w: W, series: &ObservableSeries) -> Result<()> {
    writeln!(w, "step,time,loschmidt,sigma_z_{},entropy_nats,norm", series.sigma_z_site)?;
    for n in 0..series.len() {
        let entropy = series.entropy.as_ref().map(|e| fmt17(e[n])).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            n,
            fmt17(series.times[n]),
            fmt17(series.loschmidt[n]),
            fmt17(series.sigma_z[n]),
            entropy,
            fmt17(series.norm[n])
        )?;
    }
    Ok(())
}

/// `group,delta_sigma_z,delta_loschmidt` with groups numbered from 1.
pub fn write_statistics_csv<W: Write>(mut w: W, delta_sigma_z: &[f64], delta_loschmidt: &[f64]) -> Result<()> {
    if delta_sigma_z.len() != delta_loschmidt.len() {
        return Err(argument("deviation columns differ in length"));
    }
    writeln!(w, "group,delta_sigma_z,delta_loschmidt")?;
    for (g, (z, l)) in delta_sigma_z.iter().zip(delta_loschmidt).enumerate() {
        writeln!(w, "{},{},{}", g + 1, fmt17(*z), fmt17(*l))?;
    }
    Ok(())
}

/// `step,time,delta_sigma_z,delta_loschmidt`: group-averaged deviation over
/// the samples up to each step.
pub fn write_deviation_curve_csv<W: Write>(mut w: W, result: &EnsembleResult) -> Result<()> {
    writeln!(w, "step,time,delta_sigma_z,delta_loschmidt")?;
    for n in 0..result.times.len() {
        writeln!(
            w,
            "{},{},{},{}",
            n,
            fmt17(result.times[n]),
            fmt17(result.sigma_z_curve[n]),
            fmt17(result.loschmidt_curve[n])
        )?;
    }
    Ok(())
}
