use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{build_mesh, SimplicialMesh};
use crate::error::{Error, Result};

/// On-disk mesh layout: `{"dim": n, "vertices": [[..], ..], "cells": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
}

impl MeshFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("mesh file: {e}")))?;
        if let Some(c) = file.cells.iter().find(|c| c.len() != file.dim + 1) {
            return Err(Error::Parse(format!("mesh file: cell {c:?} does not have dim+1 = {} vertices", file.dim + 1)));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mesh files always serialize")
    }

    pub fn build(self) -> Result<SimplicialMesh> {
        build_mesh(self.vertices, self.cells)
    }
}

impl SimplicialMesh {
    pub fn to_file(&self) -> MeshFile {
        MeshFile { dim: self.dim(), vertices: self.vertices().to_vec(), cells: self.cells().to_vec() }
    }

    pub fn read(path: &Path) -> Result<Self> {
        MeshFile::read(path)?.build()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file().to_json())?;
        Ok(())
    }
}
