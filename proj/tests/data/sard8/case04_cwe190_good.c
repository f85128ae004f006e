char *make_buffer(unsigned int rows, unsigned int cols)
{
    size_t bytes = (size_t)rows * cols;
    return malloc(bytes);
}
