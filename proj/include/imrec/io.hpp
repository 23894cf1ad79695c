#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "imrec/blur.hpp"
#include "imrec/image.hpp"
#include "imrec/solvers.hpp"

namespace imrec {

/// Binary PGM (P5), square, maxval 1..255. Samples map linearly onto [0, 255].
Image read_image(const std::string& path);
Image decode_pgm(std::string_view bytes);

/// Writes P5 with maxval 255; values are clamped to [0, 255] and rounded
/// half away from zero.
void write_image(const Image& m, const std::string& path);
std::string encode_pgm(const Image& m);
std::uint8_t quantize(double value);

/// Plain-text matrix: one row per line, space-separated decimals.
std::string format_psf(const PsfKernel& psf);
PsfKernel parse_psf(std::string_view text);
void write_psf(const PsfKernel& psf, const std::string& path);
PsfKernel read_psf(const std::string& path);

/// Compact PSF syntax `type[:p1[:p2]]`, parameters in fspecial order:
///   motion:len:theta  gaussian:hsize:sigma  log:hsize:sigma  disk:radius
///   unsharp:alpha     laplacian:alpha       delta            file:<path>
/// `max_size` crops gaussian/log windows to the lattice.
PsfKernel psf_from_spec(const std::string& spec, int max_size = 0);

/// CSV with header `k,tau,rel_err,misfit,objective`, 17 significant digits, LF.
std::string format_log(const std::vector<IterationRecord>& records);
void write_log(const std::vector<IterationRecord>& records, const std::string& path);

}  // namespace imrec
