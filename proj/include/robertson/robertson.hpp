#ifndef ROBERTSON_ROBERTSON_HPP
#define ROBERTSON_ROBERTSON_HPP

#include <robertson/disk_sup.hpp>
#include <robertson/errors.hpp>
#include <robertson/functions.hpp>
#include <robertson/quadrature.hpp>
#include <robertson/robertson_class.hpp>
#include <robertson/schwarzian.hpp>
#include <robertson/series.hpp>
#include <robertson/theorems.hpp>

#endif
