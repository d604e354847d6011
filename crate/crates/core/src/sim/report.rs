//! CSV rendering of campaign results.

use super::BlerRecord;

pub const CSV_HEADER: &str = "ebn0_db,frames,block_errors,bit_errors,bler,ber,mean_iter,elapsed_s";

/// Decimal rendering with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Renders records as CSV with LF endings and a trailing provenance comment.
/// Elapsed time is written only when `timing` is set so that repeated runs
/// produce identical bytes.
pub fn render_csv(records: &[BlerRecord], seed: u64, asset_hash: &str, timing: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let elapsed = if timing {
            format_significant(r.elapsed_seconds, 6)
        } else {
            "0".into()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.ebn0_db,
            r.frames,
            r.block_errors,
            r.bit_errors,
            format_significant(r.bler(), 6),
            format_significant(r.ber(), 6),
            format_significant(r.mean_iterations, 6),
            elapsed
        ));
    }
    out.push_str(&format!("# seed={seed} version={asset_hash}\n"));
    out
}
