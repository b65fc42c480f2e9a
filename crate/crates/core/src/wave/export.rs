use std::io::Write;

use crate::lti::FrequencyResponse;

/// Bode data as `omega,mag,phase_rad`.
pub fn write_bode_csv<W: Write>(fr: &FrequencyResponse, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["omega", "mag", "phase_rad"])?;
    for (omega, v) in fr.omegas().iter().zip(fr.values()) {
        out.serialize((omega, v.norm(), v.arg()))?;
    }
    out.flush()?;
    Ok(())
}
