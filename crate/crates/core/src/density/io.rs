use std::io::{BufRead, Read, Write};

use super::{DensityError, DensityMap, HeadAnnotations, Point};

pub const DMAP_MAGIC: [u8; 4] = *b"DMAP";
pub const DMAP_VERSION: u32 = 1;

/// Writes the binary density-map format: `DMAP`, then version, width and
/// height as little-endian `u32`, then `width·height` little-endian `f32`
/// cells in row-major order.
pub fn write_dmap(map: &DensityMap, mut out: impl Write) -> Result<(), DensityError> {
    let mut buf = Vec::with_capacity(16 + 4 * map.values.len());
    buf.extend_from_slice(&DMAP_MAGIC);
    buf.extend_from_slice(&DMAP_VERSION.to_le_bytes());
    buf.extend_from_slice(&map.width.to_le_bytes());
    buf.extend_from_slice(&map.height.to_le_bytes());
    for v in &map.values {
        buf.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_dmap(mut input: impl Read) -> Result<DensityMap, DensityError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < 16 {
        return Err(DensityError::Format("truncated header".into()));
    }
    if bytes[..4] != DMAP_MAGIC {
        return Err(DensityError::Format("missing DMAP magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
    let version = word(4);
    if version != DMAP_VERSION {
        return Err(DensityError::Format(format!("unsupported version {version}")));
    }
    let (width, height) = (word(8), word(12));
    let cells = width as usize * height as usize;
    let body = &bytes[16..];
    if body.len() != cells * 4 {
        return Err(DensityError::Format(format!(
            "expected {} data bytes for {width}x{height}, found {}",
            cells * 4,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
        .collect();
    Ok(DensityMap { width, height, values })
}

/// Plain-text grid: one row per line, cells separated by a single space,
/// 6 decimals.
pub fn write_text_grid(map: &DensityMap, mut out: impl Write) -> Result<(), DensityError> {
    for row in map.values.chunks(map.width.max(1) as usize) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

/// Reads the annotation text format: `#` comments and blank lines are
/// skipped, the first data line is `<width> <height>`, every following line
/// is one head `<x> <y>`. Fields may be separated by spaces, tabs or commas.
pub fn parse_annotations(input: impl BufRead) -> Result<HeadAnnotations, DensityError> {
    let mut size: Option<(u32, u32)> = None;
    let mut points = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let data = line.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let parts: Vec<&str> = fields(data).collect();
        let err = |message: String| DensityError::Parse { line: lineno, message };
        if parts.len() != 2 {
            return Err(err(format!("expected 2 fields, found {}", parts.len())));
        }
        match size {
            None => {
                let w = parts[0].parse().map_err(|_| err(format!("bad width `{}`", parts[0])))?;
                let h = parts[1]
                    .parse()
                    .map_err(|_| err(format!("bad height `{}`", parts[1])))?;
                size = Some((w, h));
            }
            Some(_) => {
                let x: f64 = parts[0].parse().map_err(|_| err(format!("bad x `{}`", parts[0])))?;
                let y: f64 = parts[1].parse().map_err(|_| err(format!("bad y `{}`", parts[1])))?;
                points.push(Point { x, y });
            }
        }
    }
    let (w, h) = size.ok_or(DensityError::Parse {
        line: 0,
        message: "missing `<width> <height>` line".into(),
    })?;
    HeadAnnotations::new(w, h, points)
}

pub fn write_annotations(ann: &HeadAnnotations, mut out: impl Write) -> Result<(), DensityError> {
    writeln!(out, "{} {}", ann.width(), ann.height())?;
    for p in ann.points() {
        writeln!(out, "{} {}", p.x, p.y)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dmap_layout() {
        let map = DensityMap {
            width: 2,
            height: 1,
            values: vec![0.25, 0.75],
        };
        let mut buf = Vec::new();
        write_dmap(&map, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 8);
        assert_eq!(&buf[..4], b"DMAP");
        assert_eq!(&buf[4..16], &[1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(&buf[16..20], &0.25f32.to_le_bytes());
        assert_eq!(read_dmap(&buf[..]).unwrap(), map);
    }

    #[test]
    fn dmap_rejects_corruption() {
        assert!(read_dmap(&b"DMAP"[..]).is_err());
        let mut buf = Vec::new();
        write_dmap(&DensityMap::zeros(3, 3), &mut buf).unwrap();
        buf.pop();
        assert!(read_dmap(&buf[..]).is_err());
        buf[0] = b'X';
        assert!(read_dmap(&buf[..]).is_err());
    }

    #[test]
    fn annotation_text() {
        let text = "# two heads\n64 48\n10.5, 3\n\n20 40.25 # trailing\n";
        let ann = parse_annotations(text.as_bytes()).unwrap();
        assert_eq!((ann.width(), ann.height()), (64, 48));
        assert_eq!(ann.points(), &[Point { x: 10.5, y: 3.0 }, Point { x: 20.0, y: 40.25 }]);

        let mut out = Vec::new();
        write_annotations(&ann, &mut out).unwrap();
        assert_eq!(parse_annotations(&out[..]).unwrap(), ann);

        assert!(parse_annotations("".as_bytes()).is_err());
        assert!(parse_annotations("4 4\n1 2 3\n".as_bytes()).is_err());
        assert!(parse_annotations("4 4\n5 1\n".as_bytes()).is_err());
        match parse_annotations("4 4\n1 x\n".as_bytes()) {
            Err(DensityError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn text_grid() {
        let map = DensityMap {
            width: 2,
            height: 2,
            values: vec![0.0, 0.5, 0.25, 1.0],
        };
        let mut out = Vec::new();
        write_text_grid(&map, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "0.000000 0.500000\n0.250000 1.000000\n"
        );
    }
}
