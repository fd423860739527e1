use super::grid::{Direction, GridKind, PassageGrid};
use crate::error::{param, LppError, Result};
use crate::lattice::Point;

/// Exit points of the boundary-model geodesics to one target. Positive
/// `k` means the path leaves the horizontal axis at `corner + k e1`,
/// negative `-l` the vertical axis at `corner + l e2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitRecord {
    pub exit_set: Vec<i64>,
    pub z_e1: i64,
    pub z_e2: i64,
}

fn check_target(grid: &PassageGrid, target: Point) -> Result<()> {
    if grid.kind != GridKind::SwBoundary || grid.direction != Direction::Forward {
        return param("exit points need a southwest boundary grid");
    }
    if !grid.contains(target) {
        return param(format!("target {target} outside the boundary grid"));
    }
    let c = grid.anchor;
    if target.x <= c.x || target.y <= c.y {
        return Err(LppError::DegenerateTarget(target.to_string()));
    }
    Ok(())
}

/// Interior weight recovered from the recursion:
/// `ω_y = G(y) - max(G(y - e1), G(y - e2))`.
fn recovered_weight(g: &PassageGrid, k: usize) -> i64 {
    g.values[k] - g.values[k - 1].max(g.values[k - g.width])
}

/// Full exit set of `G^{SW}_{corner, target}`.
///
/// Bulk passage times from each exit site to `target` come from a reverse
/// table over the interior, with interior weights recovered from the grid
/// itself, so no field is needed.
pub fn exit_extremes(grid: &PassageGrid, target: Point) -> Result<ExitRecord> {
    check_target(grid, target)?;
    let c = grid.anchor;
    let w = grid.width;
    let iw = (target.x - c.x) as usize;
    let ih = (target.y - c.y) as usize;
    // rev[(j-1)*iw + (i-1)] = bulk G from corner+(i,j) to target
    let mut rev = vec![0i64; iw * ih];
    for j in (1..=ih).rev() {
        for i in (1..=iw).rev() {
            let r = (j - 1) * iw + (i - 1);
            let next = match (i == iw, j == ih) {
                (true, true) => 0,
                (false, true) => rev[r + 1],
                (true, false) => rev[r + iw],
                (false, false) => rev[r + 1].max(rev[r + iw]),
            };
            rev[r] = next + recovered_weight(grid, j * w + i);
        }
    }
    let total = grid.value(target);
    let mut exit_set = Vec::new();
    for l in (1..=ih).rev() {
        if grid.values[l * w] + rev[(l - 1) * iw] == total {
            exit_set.push(-(l as i64));
        }
    }
    for k in 1..=iw {
        if grid.values[k] + rev[k - 1] == total {
            exit_set.push(k as i64);
        }
    }
    let z_e1 = *exit_set.last().expect("some exit attains the maximum");
    let z_e2 = exit_set[0];
    Ok(ExitRecord { exit_set, z_e1, z_e2 })
}

/// Extreme exit points `(Z^{e1}, Z^{e2})` for every interior site of a
/// boundary grid, in one forward pass. Equivalent to calling
/// [`exit_extremes`] at each site.
#[derive(Clone, Debug)]
pub struct ExitTable {
    corner: Point,
    width: usize,
    zmax: Vec<i64>,
    zmin: Vec<i64>,
}

impl ExitTable {
    pub fn from_grid(grid: &PassageGrid) -> Result<Self> {
        if grid.kind != GridKind::SwBoundary || grid.direction != Direction::Forward {
            return param("exit points need a southwest boundary grid");
        }
        let w = grid.width;
        let g = &grid.values;
        let mut zmax = vec![0i64; g.len()];
        let mut zmin = vec![0i64; g.len()];
        for i in 1..w {
            zmax[i] = i as i64;
            zmin[i] = i as i64;
        }
        for j in 1..grid.height {
            zmax[j * w] = -(j as i64);
            zmin[j * w] = -(j as i64);
        }
        for j in 1..grid.height {
            for i in 1..w {
                let k = j * w + i;
                // axis sites carry their own label, so stepping off an axis
                // inherits it
                let (left, down) = (k - 1, k - w);
                let from_left = g[left];
                let from_down = g[down];
                let (a, b) = if from_left > from_down {
                    (zmax[left], zmin[left])
                } else if from_down > from_left {
                    (zmax[down], zmin[down])
                } else {
                    (zmax[left].max(zmax[down]), zmin[left].min(zmin[down]))
                };
                zmax[k] = a;
                zmin[k] = b;
            }
        }
        Ok(ExitTable {
            corner: grid.anchor,
            width: w,
            zmax,
            zmin,
        })
    }

    /// `(z_e1, z_e2)` at `target`, or `None` off the open quadrant/table.
    pub fn get(&self, target: Point) -> Option<(i64, i64)> {
        let d = target - self.corner;
        if d.x <= 0 || d.y <= 0 || d.x as usize >= self.width {
            return None;
        }
        let k = d.y as usize * self.width + d.x as usize;
        if k >= self.zmax.len() {
            return None;
        }
        Some((self.zmax[k], self.zmin[k]))
    }
}
