#ifndef INTERAX_VERSION_HPP
#define INTERAX_VERSION_HPP

#define INTERAX_VERSION "0.1.0"

#endif
