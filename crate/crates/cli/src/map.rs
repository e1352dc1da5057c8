//! Classification maps as plain (P3) PPM images.

use thiserror::Error;

pub type Rgb = [u8; 3];

/// Colour for pixels without a prediction.
pub const UNLABELED: Rgb = [0, 0, 0];

/// One colour per class, in class order.
pub const DEFAULT_PALETTE: [Rgb; 15] = [
    [0, 0, 255],     // blue
    [255, 0, 0],     // red
    [0, 160, 0],     // green
    [255, 255, 0],   // yellow
    [255, 0, 255],   // magenta
    [0, 255, 255],   // cyan
    [255, 128, 0],   // orange
    [128, 0, 255],   // violet
    [128, 255, 0],   // lime
    [160, 82, 45],   // brown
    [255, 160, 200], // pink
    [0, 100, 100],   // teal
    [128, 128, 128], // grey
    [255, 255, 255], // white
    [100, 0, 0],     // maroon
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map grid is empty")]
    Empty,
    #[error("map rows have different lengths")]
    Ragged,
    #[error("class index {index} has no colour in a {palette}-colour palette")]
    NoColour { index: usize, palette: usize },
}

/// Renders `grid[row][col]` (`None` = unlabeled) as a P3 image, one
/// `r g b` triple per line.
pub fn render_map(grid: &[Vec<Option<usize>>], palette: &[Rgb]) -> Result<Vec<u8>, MapError> {
    let width = grid.first().map_or(0, Vec::len);
    if width == 0 {
        return Err(MapError::Empty);
    }
    if grid.iter().any(|row| row.len() != width) {
        return Err(MapError::Ragged);
    }
    let mut out = format!("P3\n{width} {}\n255\n", grid.len()).into_bytes();
    for cell in grid.iter().flatten() {
        let [r, g, b] = match *cell {
            None => UNLABELED,
            Some(index) => *palette.get(index).ok_or(MapError::NoColour {
                index,
                palette: palette.len(),
            })?,
        };
        out.extend_from_slice(format!("{r} {g} {b}\n").as_bytes());
    }
    Ok(out)
}
