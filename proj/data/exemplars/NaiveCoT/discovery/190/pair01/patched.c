void *alloc_array(int count, int size)
{
    if (count <= 0 || size <= 0 || count > INT_MAX / size)
        return NULL;
    int total = count * size;
    return malloc(total);
}
