//! Measured-visibility files: one `experiment order visibility error` record
//! per line, separated by commas or whitespace. `#` starts a comment.

use std::path::Path;

use gravdec_core::interferometry::MeasuredPoint;

use crate::error::ReportError;

pub fn parse_measured(text: &str) -> Result<Vec<MeasuredPoint>, ReportError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let err = |message: String| ReportError::Record { line, message };
        if fields.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        }
        let order: u32 = fields[1]
            .parse()
            .map_err(|_| err(format!("bad LMT order `{}`", fields[1])))?;
        let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(format!("bad {what} `{s}`")));
        let point = MeasuredPoint {
            experiment: fields[0].to_string(),
            order,
            visibility: num(fields[2], "visibility")?,
            error: num(fields[3], "error")?,
        };
        point.validate().map_err(|e| err(e.to_string()))?;
        if out
            .iter()
            .any(|p: &MeasuredPoint| p.experiment == point.experiment && p.order == point.order)
        {
            return Err(err(format!("duplicate record for {} order {}", point.experiment, order)));
        }
        out.push(point);
    }
    Ok(out)
}

pub fn load_measured(path: &Path) -> Result<Vec<MeasuredPoint>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_measured(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_separators_and_comments() {
        let pts = parse_measured("# header\nkovachy, 10, 0.6, 0.05\n\nsugarbaker 6 0.75 0.05 # trailing\n").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].order, 6);
    }

    #[test]
    fn errors_report_the_line() {
        for (text, line) in [
            ("a 1 0.5 0.1\nb 2 0.5\n", 2),
            ("a 1 0.5 0.1\n\n# c\na x 0.5 0.1\n", 4),
            ("a 1 1.5 0.1\n", 1),
            ("a 1 0.5 0.1\na 1 0.4 0.1\n", 2),
        ] {
            match parse_measured(text) {
                Err(ReportError::Record { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
