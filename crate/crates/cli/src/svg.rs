//! Standalone SVG renderings: gap curves on a log axis and the two-panel
//! signal comparison. Output is a pure function of the input series.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// One plotted curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn axis_frame(title: &str, x_label: &str, y_label: &str) -> String {
    format!(
        concat!(
            "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{tx}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{title}</text>\n",
            "<text x=\"{tx}\" y=\"{bx}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{xl}</text>\n",
            "<text x=\"18\" y=\"{my}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {my})\" font-family=\"sans-serif\" font-size=\"13\">{yl}</text>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        tx = fmt((MARGIN_L + WIDTH - MARGIN_R) / 2.0),
        bx = fmt(HEIGHT - 12.0),
        my = fmt((MARGIN_T + HEIGHT - MARGIN_B) / 2.0),
        title = title,
        xl = x_label,
        yl = y_label,
    )
}

/// Line chart with a linear x axis and a base-10 logarithmic y axis; values
/// at or below zero are clamped to the smallest positive plotted value.
pub fn log_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let floor = 1e-16f64;
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            let y = y.max(floor);
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y.log10());
            y_max = y_max.max(y.log10());
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = -1.0;
        y_max = 0.0;
    }
    if (x_max - x_min).abs() < 1e-12 {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < 1e-12 {
        y_max = y_min + 1.0;
    }
    let sx = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_L - MARGIN_R);
    let sy = |ly: f64| {
        HEIGHT - MARGIN_B - (ly - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    };

    let mut body = axis_frame(title, x_label, y_label);
    // Decade grid lines.
    let lo_dec = y_min.floor() as i64;
    let hi_dec = y_max.ceil() as i64;
    for dec in lo_dec..=hi_dec {
        let y = sy(dec as f64);
        if !(MARGIN_T..=HEIGHT - MARGIN_B).contains(&y) {
            continue;
        }
        body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
            fmt(MARGIN_L),
            fmt(y),
            fmt(WIDTH - MARGIN_R),
            fmt(y)
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e{}</text>\n",
            fmt(MARGIN_L - 6.0),
            fmt(y + 4.0),
            dec
        ));
    }
    for tick in 0..=4 {
        let x = x_min + (x_max - x_min) * tick as f64 / 4.0;
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            fmt(sx(x)),
            fmt(HEIGHT - MARGIN_B + 16.0),
            fmt(x)
        ));
    }
    body.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        fmt(MARGIN_L),
        fmt(MARGIN_T),
        fmt(WIDTH - MARGIN_L - MARGIN_R),
        fmt(HEIGHT - MARGIN_T - MARGIN_B)
    ));

    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if s.points.len() == 1 {
            let (x, y) = s.points[0];
            body.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\"/>\n",
                fmt(sx(x)),
                fmt(sy(y.max(floor).log10()))
            ));
        } else {
            let path: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y.max(floor).log10()))))
                .collect();
            body.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                path.join(" ")
            ));
        }
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            fmt(WIDTH - MARGIN_R - 130.0),
            fmt(MARGIN_T + 18.0 * (idx as f64 + 1.0)),
            s.name
        ));
    }
    wrap(body)
}

/// Two stacked panels: the noisy input series and the denoised output, on a
/// shared linear scale.
pub fn signal_panels(title: &str, noisy: &[f64], denoised: &[f64]) -> String {
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    for &v in noisy.iter().chain(denoised) {
        v_min = v_min.min(v);
        v_max = v_max.max(v);
    }
    if !v_min.is_finite() || (v_max - v_min).abs() < 1e-12 {
        v_min = -1.0;
        v_max = 1.0;
    }
    let n = noisy.len().max(2);
    let panel_h = (HEIGHT - MARGIN_T - MARGIN_B - 30.0) / 2.0;
    let sx = |i: usize| MARGIN_L + i as f64 / (n - 1) as f64 * (WIDTH - MARGIN_L - MARGIN_R);
    let sy = |top: f64, v: f64| top + (v_max - v) / (v_max - v_min) * panel_h;

    let mut body = axis_frame(title, "index", "value");
    for (panel, (label, data, color)) in [
        ("noisy", noisy, PALETTE[0]),
        ("denoised", denoised, PALETTE[1]),
    ]
    .into_iter()
    .enumerate()
    {
        let top = MARGIN_T + panel as f64 * (panel_h + 30.0);
        body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
            fmt(MARGIN_L),
            fmt(top),
            fmt(WIDTH - MARGIN_L - MARGIN_R),
            fmt(panel_h)
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{label}</text>\n",
            fmt(MARGIN_L + 8.0),
            fmt(top + 16.0)
        ));
        if data.len() == 1 {
            body.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\"/>\n",
                fmt(sx(0)),
                fmt(sy(top, data[0]))
            ));
        } else {
            let pts: Vec<String> = data
                .iter()
                .enumerate()
                .map(|(i, &v)| format!("{},{}", fmt(sx(i)), fmt(sy(top, v))))
                .collect();
            body.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
        }
    }
    wrap(body)
}

fn wrap(body: String) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n{body}</svg>\n"
    )
}
