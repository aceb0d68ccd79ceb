//! Panel statistics: daily sampling of a simulated or external panel and
//! the stylized dependence scores (adjacency, cyclicality, per-slot
//! autocorrelation).

use ambit_core::simulate::Panel;

use crate::CliError;

/// Correlation matrix over delivery-period slots plus the stylized scores.
#[derive(Debug, Clone)]
pub struct PanelStats {
    pub correlation: Panel,
    /// Mean correlation of cyclically adjacent slots at equal day.
    pub adjacency: f64,
    /// Mean correlation of antipodal slots at equal day.
    pub antipodal: f64,
    /// Correlation of the last slot of day `d` with the first slot of day
    /// `d + 1`.
    pub cyclicality: f64,
    /// Day-over-day autocorrelation per slot.
    pub lag1_autocorr: Vec<f64>,
}

/// Keeps the last row of each day of length `day_length`; a day with no
/// grid time contributes nothing.
pub fn daily_sample(times: &[f64], panel: &Panel, day_length: f64) -> Result<Panel, CliError> {
    if day_length <= 0.0 {
        return Err(CliError::Config(format!(
            "day length {day_length} must be > 0"
        )));
    }
    // day index of t: the interval ((k-1) D, k D] maps to k
    let day_of = |t: f64| -> i64 { (t / day_length - 1e-9).floor() as i64 };
    let mut picks: Vec<usize> = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        match picks.last() {
            Some(&prev) if day_of(times[prev]) == day_of(t) => {
                *picks.last_mut().unwrap() = i;
            }
            _ => picks.push(i),
        }
    }
    if picks.len() < 2 {
        return Err(CliError::Config(format!(
            "panel covers {} complete day(s); need at least 2",
            picks.len()
        )));
    }
    let rows: Vec<Vec<f64>> = picks.iter().map(|&i| panel.row(i).to_vec()).collect();
    Panel::from_rows(rows).map_err(|e| CliError::Config(e.to_string()))
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return f64::NAN;
    }
    sxy / (sxx * syy).sqrt()
}

/// Computes the correlation matrix and stylized scores of a daily panel.
pub fn panel_stats(daily: &Panel) -> Result<PanelStats, CliError> {
    let days = daily.rows();
    let slots = daily.cols();
    if days < 2 || slots < 2 {
        return Err(CliError::Config(format!(
            "daily panel is {days} x {slots}; need at least 2 days and 2 slots"
        )));
    }
    let column = |l: usize| -> Vec<f64> { (0..days).map(|d| daily.get(d, l)).collect() };
    let columns: Vec<Vec<f64>> = (0..slots).map(column).collect();

    let mut corr = Panel::zeros(slots, slots);
    for i in 0..slots {
        corr.set(i, i, 1.0);
        for j in i + 1..slots {
            let c = pearson(&columns[i], &columns[j]);
            corr.set(i, j, c);
            corr.set(j, i, c);
        }
    }

    let adjacency = (0..slots)
        .map(|l| corr.get(l, (l + 1) % slots))
        .sum::<f64>()
        / slots as f64;
    let antipodal = (0..slots)
        .map(|l| corr.get(l, (l + slots / 2) % slots))
        .sum::<f64>()
        / slots as f64;

    // last slot on day d against first slot on day d+1
    let last = &columns[slots - 1][..days - 1];
    let first = &columns[0][1..];
    let cyclicality = pearson(last, first);

    let lag1_autocorr = (0..slots)
        .map(|l| pearson(&columns[l][..days - 1], &columns[l][1..]))
        .collect();

    Ok(PanelStats {
        correlation: corr,
        adjacency,
        antipodal,
        cyclicality,
        lag1_autocorr,
    })
}
