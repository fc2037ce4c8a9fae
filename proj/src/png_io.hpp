#ifndef ADICURB_PNG_IO_HPP
#define ADICURB_PNG_IO_HPP

#include <string>

#include "types.hpp"

namespace adicurb
{

void write_png_gray8(const std::string& path, const Image8& img);
Image8 read_png_gray8(const std::string& path);

} // namespace adicurb

#endif
